#include "tdosc/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>

#include <omp.h>

#include "tdosc/observables.hpp"

namespace tdosc {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

SeriesRow evaluate_point(const SeriesPoint& p, double m0, double omega0, double h) {
  const ParameterSample& s = p.sample;
  const Excitation& e = p.e;
  const double s0 = m0 * omega0;
  SeriesRow r;
  r.t = s.t;
  r.re_z = e.z.real();
  r.im_z = e.z.imag();
  r.abs_z = std::abs(e.z);
  r.deficit = e.deficit;
  const ObservableSample o = observe(s, e);
  r.n_mean = o.n_mean;
  r.n_dot = o.n_dot;
  r.theta = o.theta;
  r.E = o.E;
  r.q2 = o.q2;
  r.p2 = o.p2;
  r.M = o.M;

  r.C_nielsen = nielsen_complexity(target_exponent(s, e), m0, omega0);
  const MomentRates mr = moment_rates(s, e);
  const double nq = s0 * o.q2, np = o.p2 / s0;
  const RateResult rate = complexity_rate_regularized(nq, np, s0 * mr.q2_dot, mr.p2_dot / s0);
  r.dC_dt = rate.value;
  r.rate_branch = rate.branch;

  const DecoupledPropagator u = gamma_plus_from_z(s, e, m0, omega0, h);
  r.C_spread = spread_complexity(u);
  r.dCs_dt = spread_rate(s, e, m0, omega0, h);
  r.gamma_re = u.gamma_plus.real();
  r.gamma_im = u.gamma_plus.imag();

  const double excess = nq + np - 1.0;
  const double sh = std::sinh(r.C_nielsen);
  r.ratio_moment = excess > 0.0 && r.C_spread > 0.0 ? r.C_spread / excess : kNaN;
  r.ratio_sinh = sh > 0.0 && r.C_spread > 0.0 ? r.C_spread / (sh * sh) : kNaN;
  return r;
}

std::vector<SeriesPoint> series_points(const ParameterProfile& profile, const Trajectory& traj) {
  std::vector<SeriesPoint> pts;
  pts.reserve(traj.size());
  for (const auto& st : traj.samples) pts.push_back({profile.evaluate(st.t), st.excitation()});
  return pts;
}

int configure_threads_from_env() {
  if (const char* env = std::getenv("TDOSC_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) omp_set_num_threads(static_cast<int>(n));
  }
  return omp_get_max_threads();
}

namespace {

OracleOutcome run_job(const OracleJob& job) {
  OracleOutcome out;
  try {
    out.result = job.max_dim > job.options.dim
                     ? oracle::propagate_escalating(job.profile, job.checkpoints, job.options, job.max_dim)
                     : oracle::propagate(job.profile, job.checkpoints, job.options);
  } catch (const NumericalError& e) {
    out.failure = e.kind();
    out.message = e.what();
  } catch (const std::exception& e) {
    out.message = e.what();
  }
  return out;
}

}  // namespace

namespace serial {

std::vector<SeriesRow> evaluate_series(std::span<const SeriesPoint> points, double m0, double omega0, double h) {
  std::vector<SeriesRow> rows(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) rows[i] = evaluate_point(points[i], m0, omega0, h);
  return rows;
}

std::vector<OracleOutcome> run_oracle_batch(std::span<const OracleJob> jobs) {
  std::vector<OracleOutcome> out;
  out.reserve(jobs.size());
  for (const auto& job : jobs) out.push_back(run_job(job));
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<SeriesRow> evaluate_series(std::span<const SeriesPoint> points, double m0, double omega0, double h) {
  std::vector<SeriesRow> rows(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rows[i] = evaluate_point(points[i], m0, omega0, h);
    } catch (...) {
#pragma omp critical(tdosc_series_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::vector<OracleOutcome> run_oracle_batch(std::span<const OracleJob> jobs) {
  std::vector<OracleOutcome> out(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = run_job(jobs[i]);
  return out;
}

}  // namespace parallel

}  // namespace tdosc
