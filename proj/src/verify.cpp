#include "tdosc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <unistd.h>

#include "tdosc/analytic_ck.hpp"
#include "tdosc/commands.hpp"
#include "tdosc/kernels.hpp"
#include "tdosc/krylov.hpp"
#include "tdosc/nielsen.hpp"
#include "tdosc/observables.hpp"
#include "tdosc/oracle.hpp"

namespace tdosc {

namespace {

constexpr double kHugeSeries = 1e5;  // adaptive series beyond this mean would exceed the term cap

Check max_check(std::string name, double measured, double tol, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.reference = 0.0;
  c.tolerance = tol;
  c.passed = std::isfinite(measured) && measured <= tol;
  c.detail = std::move(detail);
  return c;
}

Check value_check(std::string name, double measured, double reference, double tol, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.reference = reference;
  c.tolerance = tol;
  c.passed = std::isfinite(measured) && std::abs(measured - reference) <= tol;
  c.detail = std::move(detail);
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string tag(double gamma) { return fmt::format("gamma={}", gamma); }

void record(CriterionReport& r, const std::string& where, const std::exception& e) {
  r.errors.push_back(fmt::format("{}: {}", where, e.what()));
  if (dynamic_cast<const NumericalError*>(&e)) r.numerical_failure = true;
}

template <class F>
void guarded(CriterionReport& r, const std::string& where, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    record(r, where, e);
  }
}

// ---- 1 ---------------------------------------------------------------------

void closed_form(CriterionReport& r, const VerifyOptions& o) {
  for (double g : o.gammas) {
    guarded(r, tag(g), [&] {
      const CKClosedForm f(g, o.omega);
      const auto traj = integrate_z(f.profile(), uniform_grid(o.t_end, o.samples), o.tol);
      double ez = 0.0, en = 0.0;
      for (const auto& s : traj.samples) {
        ez = std::max(ez, std::abs(s.z - z_closed(f, s.t)));
        en = std::max(en, rel(mean_quanta(s.excitation()), n_mean_closed(f, s.t)));
      }
      r.checks.push_back(max_check(fmt::format("z vs closed form, {}", tag(g)), ez, 1e-8));
      r.checks.push_back(
          max_check(fmt::format("<n> vs closed form, {}", tag(g)), en, 1e-8, "relative to max(1, <n>)"));
    });
  }
}

// ---- 2 ---------------------------------------------------------------------

void dual_integrator(CriterionReport& r, const VerifyOptions& o) {
  for (double g : o.gammas) {
    guarded(r, tag(g), [&] {
      const auto prof = CKClosedForm(g, o.omega).profile();
      const auto grid = uniform_grid(o.t_end, o.samples);
      const auto a = integrate_z(prof, grid, o.tol);
      const auto b = integrate_mu(prof, grid, o.tol);
      double e = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i].z - b[i].z));
      r.checks.push_back(max_check(fmt::format("Riccati vs mode function, {}", tag(g)), e, 1e-8));
    });
  }
}

// ---- 3 ---------------------------------------------------------------------

double oracle_window(const VerifyOptions& o, double g) {
  return std::min(o.t_end, o.oracle_t_end.value_or(1.0 / g));
}

std::vector<double> checkpoints(double T, std::size_t k) {
  std::vector<double> t(k);
  for (std::size_t i = 0; i < k; ++i) t[i] = T * static_cast<double>(i + 1) / static_cast<double>(k);
  return t;
}

struct OracleQuantities {
  oracle::Moments mom;
  double spread = 0.0;
};

OracleQuantities measure(const oracle::FockState& st, const oracle::OperatorMatrices& ops,
                         const ParameterSample& s) {
  return {oracle::measure_moments(st, ops, s), oracle::measure_spread(st)};
}

std::vector<OracleOutcome> run_batch(const std::vector<OracleJob>& jobs, bool par) {
  return par ? parallel::run_oracle_batch(jobs) : serial::run_oracle_batch(jobs);
}

void oracle_equivalence(CriterionReport& r, const VerifyOptions& o) {
  const double m0 = 1.0;
  std::vector<OracleJob> base;
  for (double g : o.gammas) {
    const auto prof = CKClosedForm(g, o.omega).profile(m0);
    base.push_back({prof, checkpoints(oracle_window(o, g), o.oracle_checkpoints), o.oracle, o.oracle_max_dim});
  }
  const auto first = run_batch(base, o.parallel);

  std::vector<OracleJob> refine;
  std::vector<std::size_t> owner;
  for (std::size_t k = 0; k < base.size(); ++k) {
    if (!first[k].result) continue;
    OracleJob half = base[k];
    half.options.dim = first[k].result->dim;
    half.options.dt *= 0.5;
    half.max_dim = 0;
    OracleJob wide = base[k];
    wide.options.dim = 2 * first[k].result->dim;
    wide.max_dim = 0;
    refine.push_back(half);
    refine.push_back(wide);
    owner.push_back(k);
  }
  const auto second = run_batch(refine, o.parallel);

  for (std::size_t k = 0; k < base.size(); ++k) {
    const double g = o.gammas[k];
    if (!first[k].result) {
      r.errors.push_back(fmt::format("{}: {}", tag(g), first[k].message));
      r.numerical_failure = r.numerical_failure || first[k].failure.has_value();
      continue;
    }
    guarded(r, tag(g), [&] {
      const auto& prop = *first[k].result;
      const auto& job = base[k];
      const auto s0 = job.profile.evaluate(0.0);
      const double s0w = s0.mass_frequency();
      const auto ops = oracle::build_operators(prop.dim, s0.m, s0.omega);
      const auto eigen_ops = oracle::build_operators(2 * prop.dim, s0.m, s0.omega);
      const auto traj = integrate_z(job.profile, job.checkpoints, o.tol);
      double eq = 0.0, ep = 0.0, eh = 0.0, eocc = 0.0, ecs = 0.0, ratio_m = 0.0, ratio_s = 0.0;
      for (std::size_t i = 0; i < prop.states.size(); ++i) {
        const auto s = job.profile.evaluate(job.checkpoints[i]);
        const Excitation e = traj[i].excitation();
        const auto q = measure(prop.states[i], ops, s);
        const auto mom = second_moments(s, e);
        eq = std::max(eq, std::abs(q.mom.q2 - mom.q2));
        ep = std::max(ep, std::abs(q.mom.p2 - mom.p2));
        eh = std::max(eh, std::abs(q.mom.H - mean_energy(s, e)));
        const auto occ = oracle::measure_occupations(prop.states[i], s, eigen_ops);
        const auto ref = occupation_probabilities(e, prop.dim - 1);
        for (std::size_t j = 0; j < occ.probabilities.size(); ++j)
          eocc = std::max(eocc, std::abs(occ.probabilities[j] - ref.probabilities[j]));
        ecs = std::max(ecs, std::abs(q.spread - spread_complexity(gamma_plus_from_z(s, e, s0.m, s0.omega))));
        if (i + 1 == prop.states.size()) {
          const double sum = s0w * q.mom.q2 + q.mom.p2 / s0w;
          const double sh = std::sinh(0.5 * std::acosh(sum));
          ratio_m = q.spread / (sum - 1.0);
          ratio_s = q.spread / (sh * sh);
        }
      }
      const std::string where = fmt::format("{}, N={}, t in [0, {:.4g}]", tag(g), prop.dim, job.checkpoints.back());
      r.checks.push_back(max_check("oracle <q^2>, " + where, eq, 1e-6));
      r.checks.push_back(max_check("oracle <p^2>, " + where, ep, 1e-6));
      r.checks.push_back(max_check("oracle <H> vs omega(<n>+1/2), " + where, eh, 1e-6));
      r.checks.push_back(max_check("oracle P_2k, " + where, eocc, 1e-6));
      r.checks.push_back(max_check("oracle C_S vs Gamma_+, " + where, ecs, 1e-6));
      const double T = job.checkpoints.back();
      r.checks.push_back(max_check("oracle norm drift, " + where, prop.max_norm_drift, 1e-9 * std::max(1.0, T)));
      r.checks.push_back(value_check("oracle C_S/(q2+p2-1), " + where, ratio_m, kSpreadMomentPrefactor, 1e-6,
                                     fmt::format("{:.8f}", ratio_m)));
      r.checks.push_back(
          value_check("oracle C_S/sinh^2(C), " + where, ratio_s, 0.5, 1e-6, fmt::format("{:.8f}", ratio_s)));
    });
  }

  for (std::size_t j = 0; j < owner.size(); ++j) {
    const std::size_t k = owner[j];
    const double g = o.gammas[k];
    const auto& prop = *first[k].result;
    const auto& half = second[2 * j];
    const auto& wide = second[2 * j + 1];
    if (!half.result) {
      r.errors.push_back(fmt::format("{} step halving: {}", tag(g), half.message));
      r.numerical_failure = r.numerical_failure || half.failure.has_value();
    } else {
      double d = 0.0;
      for (std::size_t i = 0; i < prop.states.size(); ++i)
        d = std::max(d, (prop.states[i].c - half.result->states[i].c).cwiseAbs().maxCoeff());
      r.checks.push_back(max_check(fmt::format("oracle step halving, {}", tag(g)), d, 1e-8));
    }
    if (!wide.result) {
      r.errors.push_back(fmt::format("{} dimension doubling: {}", tag(g), wide.message));
      r.numerical_failure = r.numerical_failure || wide.failure.has_value();
    } else {
      guarded(r, tag(g), [&] {
        const auto& job = base[k];
        const auto s0 = job.profile.evaluate(0.0);
        const auto ops = oracle::build_operators(prop.dim, s0.m, s0.omega);
        const auto ops2 = oracle::build_operators(wide.result->dim, s0.m, s0.omega);
        double d = 0.0;
        for (std::size_t i = 0; i < prop.states.size(); ++i) {
          const auto s = job.profile.evaluate(job.checkpoints[i]);
          const auto a = measure(prop.states[i], ops, s);
          const auto b = measure(wide.result->states[i], ops2, s);
          d = std::max({d, std::abs(a.mom.q2 - b.mom.q2), std::abs(a.mom.p2 - b.mom.p2),
                        std::abs(a.mom.H - b.mom.H), std::abs(a.spread - b.spread)});
        }
        r.checks.push_back(
            max_check(fmt::format("oracle N={} vs N={}, {}", prop.dim, wide.result->dim, tag(g)), d, 1e-8));
      });
    }
  }
}

// ---- 4 ---------------------------------------------------------------------

void nielsen_forms(CriterionReport& r, const VerifyOptions& o) {
  for (double g : o.gammas) {
    guarded(r, tag(g), [&] {
      const auto prof = CKClosedForm(g, o.omega).profile();
      const auto traj = integrate_z(prof, uniform_grid(o.t_end, o.samples), o.tol);
      const double m0 = 1.0, w0 = prof.omega0(), s0 = m0 * w0;
      const auto ref = reference_covariance(m0, w0);
      double e = 0.0;
      std::size_t skipped = 0;
      for (const auto& st : traj.samples) {
        const auto s = prof.evaluate(st.t);
        const Excitation ex = st.excitation();
        const cplx wt = target_exponent(s, ex);
        const auto mom = second_moments(s, ex);
        const double forms_a[] = {nielsen_complexity(ref, wt), nielsen_complexity(wt, m0, w0),
                                  complexity_from_moments(s0 * mom.q2, mom.p2 / s0)};
        double lo = *std::min_element(std::begin(forms_a), std::end(forms_a));
        double hi = *std::max_element(std::begin(forms_a), std::end(forms_a));
        try {
          const double n = mean_quanta(ex), nd = n_dot(s, ex);
          const double E = mean_energy(s, ex);
          const double Edot = s.omega_dot * (n + 0.5) + s.omega * nd;
          for (double c : {complexity_particle_form(s, n, nd), complexity_energy_form(s, E, Edot)}) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
          }
        } catch (const NumericalError& err) {
          if (err.kind() != Failure::DegenerateBackground) throw;
          ++skipped;
        }
        e = std::max(e, hi - lo);
      }
      r.checks.push_back(max_check(fmt::format("four Nielsen forms, {}", tag(g)), e, 1e-10,
                                   skipped ? fmt::format("{} points without particle/energy form", skipped) : ""));
    });
  }
}

// ---- 5 ---------------------------------------------------------------------

std::vector<SeriesRow> rows_for(const ParameterProfile& prof, const Trajectory& traj, const VerifyOptions& o) {
  const auto pts = series_points(prof, traj);
  const auto s0 = prof.evaluate(0.0);
  return o.parallel ? parallel::evaluate_series(pts, s0.m, s0.omega) : serial::evaluate_series(pts, s0.m, s0.omega);
}

void constant_ratio(CriterionReport& r, const VerifyOptions& o) {
  for (double g : o.gammas) {
    guarded(r, tag(g), [&] {
      const auto prof = CKClosedForm(g, o.omega).profile();
      std::vector<double> grid;
      for (double t : uniform_grid(o.t_end, o.samples))
        if (t >= 0.05) grid.push_back(t);
      const auto rows = rows_for(prof, integrate_z(prof, grid, o.tol), o);
      auto spread = [&](auto field, const char* label, double expected) {
        double lo = HUGE_VAL, hi = -HUGE_VAL, sum = 0.0;
        for (const auto& row : rows) {
          const double v = row.*field;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          sum += v;
        }
        const double mean = sum / static_cast<double>(rows.size());
        Check c = max_check(fmt::format("{} constancy, {}", label, tag(g)), (hi - lo) / std::abs(mean), 1e-6,
                            fmt::format("constant = {:.8f}", mean));
        c.reference = expected;
        r.checks.push_back(c);
      };
      spread(&SeriesRow::ratio_moment, "C_S/(q2+p2-1)", kSpreadMomentPrefactor);
      spread(&SeriesRow::ratio_sinh, "C_S/sinh^2(C)", 0.5);
    });
  }
}

// ---- 6 ---------------------------------------------------------------------

void early_time(CriterionReport& r, const VerifyOptions& o) {
  const double g = 0.5;
  guarded(r, tag(g), [&] {
    const auto prof = CKClosedForm(g, o.omega).profile();
    std::vector<double> t;
    for (int i = 0; i <= 40; ++i) t.push_back(std::pow(10.0, -3.0 + i / 40.0));
    const auto traj = integrate_z(prof, t, o.tol);
    const auto s0 = prof.evaluate(0.0);
    std::vector<double> x, y;
    for (const auto& st : traj.samples) {
      const double cs = spread_complexity(gamma_plus_from_z(prof.evaluate(st.t), st.excitation(), s0.m, s0.omega));
      x.push_back(std::log(st.t));
      y.push_back(std::log(cs));
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxy / sxx;
    const double coeff = std::exp(my - slope * mx);
    const double expected = early_time_quartic(prof);
    r.checks.push_back(value_check("early-time exponent", slope, 4.0, 0.02, fmt::format("{:.6f}", slope)));
    r.checks.push_back(value_check("early-time coefficient (relative)", coeff / expected, 1.0, 0.01,
                                   fmt::format("fit {:.8f}, expected {:.8f}", coeff, expected)));
  });
}

// ---- 7 ---------------------------------------------------------------------

void normalizations(CriterionReport& r, const VerifyOptions& o) {
  for (double g : o.gammas) {
    guarded(r, tag(g), [&] {
      const auto prof = CKClosedForm(g, o.omega).profile();
      const auto traj = integrate_z(prof, uniform_grid(o.t_end, o.samples), o.tol);
      const auto s0 = prof.evaluate(0.0);
      const auto norm = normalizer_for(reference_covariance(s0.m, s0.omega));
      double eocc = 0.0, ekry = 0.0, edet = 0.0, unc = HUGE_VAL;
      std::size_t skipped = 0;
      for (const auto& st : traj.samples) {
        const auto s = prof.evaluate(st.t);
        const Excitation e = st.excitation();
        const auto u = gamma_plus_from_z(s, e, s0.m, s0.omega);
        if (mean_quanta(e) <= kHugeSeries && spread_complexity(u) <= kHugeSeries) {
          eocc = std::max(eocc, std::abs(1.0 - occupation_probabilities(e).total()));
          ekry = std::max(ekry, std::abs(1.0 - krylov_amplitudes(u).total()));
        } else {
          ++skipped;
        }
        const auto G = norm.apply(covariance_of_exponent(target_exponent(s, e)));
        edet = std::max(edet, std::abs(G.det() - 1.0) / std::max(1.0, G.g_qq * G.g_pp));
        const auto mom = second_moments(s, e);
        unc = std::min(unc, mom.q2 * mom.p2);
      }
      const std::string note =
          skipped ? fmt::format("{} points with mean index above 1e5 not summed", skipped) : std::string();
      r.checks.push_back(max_check(fmt::format("sum P_2k, {}", tag(g)), eocc, 1e-10, note));
      r.checks.push_back(max_check(fmt::format("sum |psi_n|^2, {}", tag(g)), ekry, 1e-10, note));
      r.checks.push_back(max_check(fmt::format("covariance determinant, {}", tag(g)), edet, 1e-10,
                                   "relative to g_qq g_pp when that exceeds 1"));
      Check c;
      c.name = fmt::format("uncertainty q2 p2 >= 1/4, {}", tag(g));
      c.measured = unc;
      c.reference = 0.25;
      c.tolerance = 1e-12;
      c.passed = unc >= 0.25 - 1e-12;
      r.checks.push_back(c);
    });
  }
}

// ---- 8 ---------------------------------------------------------------------

double fd_error(const std::vector<double>& t, const std::vector<double>& f, const std::vector<double>& analytic,
                const std::vector<bool>& usable) {
  const auto d = spread_rate_series(t, f);
  double e = 0.0;
  for (std::size_t i = 2; i + 2 < t.size(); ++i) {
    bool ok = true;
    for (std::size_t k = i - 2; k <= i + 2; ++k) ok = ok && usable[k];
    if (ok) e = std::max(e, std::abs(d[i] - analytic[i]) / std::max(1.0, std::abs(analytic[i])));
  }
  return e;
}

void derivatives(CriterionReport& r, const VerifyOptions& o) {
  const double t0 = 0.1, t1 = std::min(5.0, o.t_end), h = 1e-3;
  const auto count = static_cast<std::size_t>(std::llround((t1 - t0) / h)) + 1;
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = t0 + h * static_cast<double>(i);
  for (double g : o.gammas) {
    guarded(r, tag(g), [&] {
      const auto prof = CKClosedForm(g, o.omega).profile();
      const auto traj = integrate_z(prof, t, o.tol);
      const auto s0 = prof.evaluate(0.0);
      const double s0w = s0.mass_frequency();
      const std::size_t n = t.size();
      std::vector<double> nm(n), nd(n), th(n), thd(n), q2(n), q2d(n), p2(n), p2d(n), C(n), Cd(n), cs(n), csd(n);
      std::vector<bool> all(n, true), phase(n, true);
      for (std::size_t i = 0; i < n; ++i) {
        const auto s = prof.evaluate(t[i]);
        const Excitation e = traj[i].excitation();
        nm[i] = mean_quanta(e);
        nd[i] = n_dot(s, e);
        th[i] = std::arg(e.z);
        phase[i] = std::abs(e.z) > 1e-2;
        thd[i] = phase[i] ? theta_dot(s, e) : 0.0;
        const auto mom = second_moments(s, e);
        const auto rates = moment_rates(s, e);
        q2[i] = mom.q2;
        p2[i] = mom.p2;
        q2d[i] = rates.q2_dot;
        p2d[i] = rates.p2_dot;
        C[i] = complexity_from_moments(s0w * mom.q2, mom.p2 / s0w);
        Cd[i] = complexity_rate(s0w * mom.q2, mom.p2 / s0w, s0w * rates.q2_dot, rates.p2_dot / s0w);
        cs[i] = spread_complexity(gamma_plus_from_z(s, e, s0.m, s0.omega));
        csd[i] = spread_rate(s, e, s0.m, s0.omega);
      }
      for (std::size_t i = 1; i < n; ++i) {  // unwrap 2 pi jumps
        double d = th[i] - th[i - 1];
        th[i] -= 2.0 * M_PI * std::round(d / (2.0 * M_PI));
      }
      auto add = [&](const char* name, double err) {
        r.checks.push_back(
            max_check(fmt::format("{} vs finite differences, {}", name, tag(g)), err, 1e-6, "relative to max(1, |rate|)"));
      };
      add("n_dot", fd_error(t, nm, nd, all));
      add("theta_dot", fd_error(t, th, thd, phase));
      add("d<q^2>/dt", fd_error(t, q2, q2d, all));
      add("d<p^2>/dt", fd_error(t, p2, p2d, all));
      add("dC/dt", fd_error(t, C, Cd, all));
      add("dC_S/dt", fd_error(t, cs, csd, all));
    });
  }
}

// ---- 9 ---------------------------------------------------------------------

void chain_identity(CriterionReport& r, const VerifyOptions&) {
  const std::size_t n_max = 64;
  std::mt19937_64 rng(0x5eed2024ULL);
  std::uniform_real_distribution<double> pos(0.2, 5.0), any(-3.0, 3.0);
  for (int k = 0; k < 5; ++k) {
    guarded(r, fmt::format("background {}", k), [&] {
      const double m0 = pos(rng), w0 = pos(rng);
      ParameterSample s;
      s.t = pos(rng);
      s.m = pos(rng);
      s.omega = pos(rng);
      s.m_dot = any(rng);
      s.omega_dot = any(rng);
      const auto chain = lanczos_coefficients(su11_coefficients(s, m0, w0), kEvenSector, n_max);
      const auto ops = oracle::build_operators(n_max + 1, m0, w0);
      const auto H = oracle::hamiltonian_matrix(s, ops);
      double e = 0.0;
      for (std::size_t n = 0; n <= n_max; ++n) {
        e = std::max(e, rel(chain.a[n], H.diag[static_cast<Eigen::Index>(n)]));
        if (n > 0) e = std::max(e, rel(chain.b[n], H.off[static_cast<Eigen::Index>(n - 1)]));
      }
      r.checks.push_back(max_check(
          fmt::format("Lanczos vs raw-operator H, m0={:.3f} w0={:.3f} m={:.3f} w={:.3f}", m0, w0, s.m, s.omega), e,
          1e-12, "relative to max(1, |entry|)"));
      r.checks.push_back(
          max_check(fmt::format("[Q, P] = i on the interior block, background {}", k), ops.commutator_defect(), 1e-10));
    });
  }
}

// ---- 10 --------------------------------------------------------------------

struct Peak {
  double t, value;
};

std::vector<Peak> refined_peaks(const std::vector<double>& t, const std::vector<double>& f) {
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (!(f[i] > f[i - 1] && f[i] >= f[i + 1])) continue;
    const double h = t[i + 1] - t[i];
    const double den = f[i - 1] - 2.0 * f[i] + f[i + 1];
    const double shift = den != 0.0 ? 0.5 * (f[i - 1] - f[i + 1]) / den : 0.0;
    peaks.push_back({t[i] + shift * h, f[i] - 0.25 * (f[i - 1] - f[i + 1]) * shift});
  }
  return peaks;
}

void figures(CriterionReport& r, const VerifyOptions& o) {
  guarded(r, "figures", [&] {
    FigureSpec spec;
    spec.gammas = o.gammas;
    spec.omega = o.omega;
    spec.t_end = o.t_end;
    spec.samples = o.samples;
    spec.precision = o.precision;
    const bool scratch = o.figures_dir.empty();
    const auto dir = scratch ? std::filesystem::temp_directory_path() / fmt::format("tdosc_figures_{}", ::getpid())
                             : o.figures_dir;
    const auto files = write_figures(spec, dir);
    for (const auto& file : files) {
      const Table tab = read_table(file.path);
      const DampingRegime reg = classify_regime(file.gamma, o.omega);
      const std::string where = fmt::format("fig{} {} gamma={}", file.figure, file.regime, file.gamma);
      bool finite = true;
      for (const auto& row : tab.rows)
        for (double v : row) finite = finite && std::isfinite(v);
      Check fin = max_check("finite values, " + where, finite ? 0.0 : 1.0, 0.0);
      r.checks.push_back(fin);
      if (file.figure != 1) {
        const auto first = tab.rows.front();
        double at0 = 0.0;
        for (std::size_t c = 1; c < first.size(); ++c)
          if (tab.columns[c].rfind("C", 0) == 0) at0 = std::max(at0, std::abs(first[c]));
        if (file.figure == 2) r.checks.push_back(max_check("complexities vanish at t=0, " + where, at0, 1e-15));
        continue;
      }
      const auto t = tab.series("t");
      const auto n = tab.series("n_mean");
      const auto deficit = tab.series("deficit");
      // |z| itself prints as 1 once 1 - |z| is below the output precision
      Check bounded;
      bounded.name = "|z| below 1 (min 1 - |z|^2 > 0), " + where;
      bounded.measured = *std::min_element(deficit.begin(), deficit.end());
      bounded.reference = 0.0;
      bounded.passed = bounded.measured > 0.0;
      r.checks.push_back(bounded);
      const double g = file.gamma;
      if (reg.regime == Regime::Underdamped) {
        const auto peaks = refined_peaks(t, n);
        const double period = M_PI / reg.Omega;
        double measured = NAN, top = 0.0;
        if (peaks.size() >= 2) measured = (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1);
        for (const auto& p : peaks) top = std::max(top, p.value);
        const double bound = g * g / (reg.Omega * reg.Omega);
        r.checks.push_back(value_check("underdamped period pi/Omega (relative), " + where, measured / period, 1.0, 1e-3,
                                       fmt::format("{} peaks, period {:.8f}", peaks.size(), measured)));
        r.checks.push_back(value_check("underdamped max <n> = gamma^2/Omega^2 (relative), " + where, top / bound, 1.0,
                                       1e-4, fmt::format("max {:.8f}, bound {:.8f}", top, bound)));
      } else if (reg.regime == Regime::Critical) {
        double e = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) e = std::max(e, std::abs(n[i] / (g * g * t[i] * t[i]) - 1.0));
        r.checks.push_back(max_check("critical <n> = gamma^2 t^2 (relative), " + where, e, 1e-10));
      } else {
        std::size_t violations = 0;
        for (std::size_t i = 1; i < n.size(); ++i)
          if (!(n[i] > n[i - 1])) ++violations;
        r.checks.push_back(max_check("overdamped <n> strictly increasing, " + where, static_cast<double>(violations), 0.0,
                                     fmt::format("{} samples", n.size())));
      }
    }
    if (scratch) std::filesystem::remove_all(dir);
  });
}

}  // namespace

bool CriterionReport::passed() const {
  if (!errors.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string CriterionReport::summary() const {
  const auto failed = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; });
  std::string s = fmt::format("[{}] {:2d} {} ({}/{} checks passed", passed() ? "PASS" : "FAIL", id, title,
                              checks.size() - static_cast<std::size_t>(failed), checks.size());
  if (!errors.empty()) s += fmt::format(", {} errors: {}", errors.size(), errors.front());
  return s + ")";
}

VerifyOptions verify_options(const RunConfig& c) {
  VerifyOptions o;
  if (c.has("verify.gammas"))
    o.gammas = c.verify_gammas;
  else if (c.has("profile.gamma"))
    o.gammas = {c.gamma};
  o.omega = c.omega0;
  o.t_end = c.t_end_or(10.0);
  o.samples = c.samples;
  o.tol = {c.rel_tol, c.abs_tol};
  o.oracle.dim = c.oracle_dim;
  o.oracle.dt = c.oracle_dt;
  o.oracle.scheme = c.oracle_scheme;
  // an explicit dimension is taken literally unless a cap is also given
  o.oracle_max_dim = c.has("oracle.max_dim") ? c.oracle_max_dim : (c.has("oracle.dim") ? c.oracle_dim : 512);
  o.oracle_t_end = c.oracle_t_end;
  o.oracle_checkpoints = c.oracle_checkpoints;
  o.precision = c.precision;
  return o;
}

const char* criterion_title(int id) {
  switch (id) {
    case 1: return "closed-form agreement";
    case 2: return "dual-integrator agreement";
    case 3: return "oracle equivalence";
    case 4: return "four-form Nielsen equivalence";
    case 5: return "constant-ratio law";
    case 6: return "early-time scaling";
    case 7: return "normalizations";
    case 8: return "derivative identities";
    case 9: return "chain identity";
    case 10: return "figure regeneration";
  }
  return "unknown";
}

CriterionReport run_criterion(int id, const VerifyOptions& o) {
  CriterionReport r;
  r.id = id;
  r.title = criterion_title(id);
  switch (id) {
    case 1: closed_form(r, o); break;
    case 2: dual_integrator(r, o); break;
    case 3: oracle_equivalence(r, o); break;
    case 4: nielsen_forms(r, o); break;
    case 5: constant_ratio(r, o); break;
    case 6: early_time(r, o); break;
    case 7: normalizations(r, o); break;
    case 8: derivatives(r, o); break;
    case 9: chain_identity(r, o); break;
    case 10: figures(r, o); break;
    default: throw std::out_of_range(fmt::format("no criterion {}", id));
  }
  return r;
}

bool VerifyReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionReport& c) { return c.passed(); });
}

bool VerifyReport::numerical_failure() const {
  return std::any_of(criteria.begin(), criteria.end(), [](const CriterionReport& c) { return c.numerical_failure; });
}

nlohmann::json VerifyReport::to_json() const {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["passed"] = passed();
  j["numerical_failure"] = numerical_failure();
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : criteria) {
    nlohmann::json jc{{"id", c.id}, {"title", c.title}, {"passed", c.passed()}, {"errors", c.errors}};
    jc["checks"] = nlohmann::json::array();
    for (const auto& k : c.checks)
      jc["checks"].push_back({{"name", k.name},
                              {"measured", num(k.measured)},
                              {"reference", num(k.reference)},
                              {"tolerance", num(k.tolerance)},
                              {"passed", k.passed},
                              {"detail", k.detail}});
    j["criteria"].push_back(jc);
  }
  return j;
}

VerifyReport run_verify(const VerifyOptions& o) {
  VerifyReport rep;
  for (int id = 1; id <= kCriterionCount; ++id) rep.criteria.push_back(run_criterion(id, o));
  return rep;
}

}  // namespace tdosc
