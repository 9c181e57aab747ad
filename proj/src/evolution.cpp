#include "tdosc/evolution.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc {

namespace {

// Tolerated overshoot of |z| past the unit circle from rounding alone.
constexpr double kEscapeSlack = 1e-9;
constexpr double kRadialFromLogNorm = 1e-3;
constexpr double kMinModulus = 1e-14;

void check_times(const ParameterProfile& profile, std::span<const double> times) {
  if (times.empty()) throw NumericalError(Failure::Domain, "no output times requested");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0) throw NumericalError(Failure::Domain, "output times must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw NumericalError(Failure::Domain, "output times must be strictly increasing");
  }
  const auto [lo, hi] = profile.domain();
  if (lo > 0.0 || hi < times.back())
    throw NumericalError(Failure::Domain,
                         fmt::format("profile domain [{}, {}] does not cover [0, {}]", lo, hi, times.back()));
}

}  // namespace

void Excitation::require_normalizable() const {
  if (!(deficit > 0.0) || !std::isfinite(deficit))
    throw NumericalError(Failure::Domain, fmt::format("|z| >= 1 (z = {}{:+}i)", z.real(), z.imag()));
}

cplx z_rhs(const ParameterSample& s, cplx z) {
  const cplx i(0.0, 1.0);
  return -2.0 * i * s.omega * z - 0.5 * s.log_rate() * (z * z - 1.0);
}

double adiabatic_R(const ParameterSample& s) { return 0.5 * s.m * s.omega; }

std::vector<double> uniform_grid(double t_end, std::size_t n_out) {
  if (n_out < 2) throw NumericalError(Failure::Domain, "need at least two output samples");
  if (!(t_end > 0.0)) throw NumericalError(Failure::Domain, "t_end must be positive");
  std::vector<double> t(n_out);
  for (std::size_t i = 0; i < n_out; ++i) t[i] = t_end * static_cast<double>(i) / static_cast<double>(n_out - 1);
  t.back() = t_end;
  return t;
}

Trajectory integrate_z(const ParameterProfile& profile, std::span<const double> times, ode::Tolerances tol) {
  check_times(profile, times);
  Trajectory traj;
  traj.tolerances = tol;

  // state: Re z, Im z, ln(1 + <n>)
  auto rhs = [&](double t, const ode::State<3>& y) {
    const ParameterSample s = profile.evaluate(t);
    const cplx dz = z_rhs(s, cplx(y[0], y[1]));
    return ode::State<3>{dz.real(), dz.imag(), s.log_rate() * y[0]};
  };
  auto accept = [](double t, const ode::State<3>& y) {
    const double r = std::hypot(y[0], y[1]);
    if (!std::isfinite(r) || !std::isfinite(y[2]) || r >= 1.0 + kEscapeSlack)
      throw NumericalError(Failure::DomainEscape, fmt::format("|z| = {} at t = {}", r, t));
  };
  const auto ys = ode::integrate<3>(rhs, 0.0, ode::State<3>{0.0, 0.0, 0.0}, times, tol, traj.stats, accept);

  traj.samples.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    cplx z(ys[i][0], ys[i][1]);
    // Near the unit circle 1 - |z| falls below the integration error of z while the
    // log-norm still resolves it, so the radius is taken from the log-norm there.
    const double deficit = std::exp(-ys[i][2]);
    if (deficit < kRadialFromLogNorm && std::abs(z) > 0.0) z *= std::sqrt(-std::expm1(-ys[i][2])) / std::abs(z);
    traj.samples.push_back({times[i], z, ys[i][2]});
  }
  return traj;
}

Trajectory integrate_z(const ParameterProfile& profile, double t_end, ode::Tolerances tol, std::size_t n_out) {
  const auto grid = uniform_grid(t_end, n_out);
  return integrate_z(profile, grid, tol);
}

std::vector<ModeFunctionState> integrate_mode_function(const ParameterProfile& profile,
                                                       std::span<const double> times, ode::Tolerances tol,
                                                       ode::Stats* stats) {
  check_times(profile, times);
  const double w0 = profile.evaluate(0.0).omega;

  // state: Re mu, Im mu, Re mu', Im mu'
  auto rhs = [&](double t, const ode::State<4>& y) {
    const ParameterSample s = profile.evaluate(t);
    const double damp = s.m_dot / s.m;
    const double w2 = s.omega * s.omega;
    return ode::State<4>{y[2], y[3], -damp * y[2] - w2 * y[0], -damp * y[3] - w2 * y[1]};
  };
  auto accept = [](double t, const ode::State<4>& y) {
    if (std::hypot(y[0], y[1]) < kMinModulus)
      throw NumericalError(Failure::ZeroCrossing, fmt::format("|mu| below 1e-14 at t = {}", t));
  };
  ode::Stats local;
  const auto ys =
      ode::integrate<4>(rhs, 0.0, ode::State<4>{1.0, 0.0, 0.0, w0}, times, tol, stats ? *stats : local, accept);

  std::vector<ModeFunctionState> out;
  out.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i)
    out.push_back({times[i], cplx(ys[i][0], ys[i][1]), cplx(ys[i][2], ys[i][3])});
  return out;
}

ExcitationState excitation_from_mode(const ParameterSample& s, const ModeFunctionState& mode, double m0_omega0) {
  const double mu2 = std::norm(mode.mu);
  if (std::sqrt(mu2) < kMinModulus)
    throw NumericalError(Failure::ZeroCrossing, fmt::format("|mu| below 1e-14 at t = {}", mode.t));
  // 2R = -i m mu'/mu = m (Im - i Re)(conj(mu) mu') / |mu|^2
  const cplx w = std::conj(mode.mu) * mode.mu_dot;
  const cplx two_R(m0_omega0 / mu2, -s.m * w.real() / mu2);
  const double smw = s.mass_frequency();
  const cplx z = (smw - two_R) / (smw + two_R);
  // 1 - |z|^2 = 4 smw Re(2R) / |smw + 2R|^2
  const double deficit = 4.0 * smw * two_R.real() / std::norm(smw + two_R);
  return {mode.t, z, -std::log(deficit)};
}

Trajectory integrate_mu(const ParameterProfile& profile, std::span<const double> times, ode::Tolerances tol) {
  Trajectory traj;
  traj.tolerances = tol;
  const auto modes = integrate_mode_function(profile, times, tol, &traj.stats);
  const ParameterSample s0 = profile.evaluate(0.0);
  const double m0w0 = s0.mass_frequency();
  traj.samples.reserve(modes.size());
  for (const auto& mode : modes) traj.samples.push_back(excitation_from_mode(profile.evaluate(mode.t), mode, m0w0));
  return traj;
}

Trajectory integrate_mu(const ParameterProfile& profile, double t_end, ode::Tolerances tol, std::size_t n_out) {
  const auto grid = uniform_grid(t_end, n_out);
  return integrate_mu(profile, grid, tol);
}

double wronskian(const ParameterSample& s, const ModeFunctionState& mode) {
  return s.m * (std::conj(mode.mu) * mode.mu_dot).imag();
}

}  // namespace tdosc
