#include "tdosc/nielsen.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc {

const char* to_string(RateBranch branch) {
  switch (branch) {
    case RateBranch::Exact: return "exact";
    case RateBranch::LocalModel: return "local_model";
    case RateBranch::Limit: return "limit";
  }
  return "unknown";
}

namespace {

double half_arcosh(double x) {
  // x < 1 only from rounding at coincidence
  return 0.5 * std::acosh(std::max(x, 1.0));
}

void require_moment_sum(double sum) {
  if (sum < 1.0 - 1e-12)
    throw NumericalError(Failure::Domain, fmt::format("<q^2> + <p^2> = {} is below 1", sum));
}

}  // namespace

CovarianceMatrix covariance_of_exponent(cplx omega_t) {
  const double a = omega_t.real();
  const double b = omega_t.imag();
  if (!(a > 0.0)) throw NumericalError(Failure::NonNormalizable, fmt::format("Re omega_t = {}", a));
  return {1.0 / a, -b / a, (a * a + b * b) / a};
}

CovarianceMatrix reference_covariance(double m0, double omega0) {
  const double s0 = m0 * omega0;
  return {1.0 / s0, 0.0, s0};
}

Normalizer normalizer_for(const CovarianceMatrix& reference) {
  if (reference.g_qp != 0.0) throw NumericalError(Failure::Domain, "reference covariance must be diagonal");
  return {1.0 / std::sqrt(reference.g_qq), 1.0 / std::sqrt(reference.g_pp)};
}

cplx target_exponent(const ParameterSample& s, const Excitation& e) {
  e.require_normalizable();
  // (1 - z)(1 + conj z) = (1 - |z|^2) - 2 i Im z
  const double smw = s.mass_frequency();
  const double den = std::norm(1.0 + e.z);
  return {smw * e.deficit / den, -2.0 * smw * e.z.imag() / den};
}

double nielsen_complexity(const CovarianceMatrix& reference, cplx omega_t) {
  const CovarianceMatrix g = normalizer_for(reference).apply(covariance_of_exponent(omega_t));
  return half_arcosh(0.5 * g.trace());
}

double nielsen_complexity(cplx omega_t, double m0, double omega0) {
  if (!(omega_t.real() > 0.0))
    throw NumericalError(Failure::NonNormalizable, fmt::format("Re omega_t = {}", omega_t.real()));
  const double s0 = m0 * omega0;
  return half_arcosh(0.5 * (std::norm(omega_t) + s0 * s0) / (s0 * omega_t.real()));
}

double complexity_from_moments(double q2, double p2) {
  require_moment_sum(q2 + p2);
  return half_arcosh(q2 + p2);
}

NielsenCoefficients nielsen_coefficients(const ParameterSample& s) {
  const double kappa = s.log_rate();
  if (std::abs(kappa) < kDegenerateRate)
    throw NumericalError(Failure::DegenerateBackground, "omega_dot/omega + m_dot/m vanishes");
  const double smw = s.mass_frequency();
  NielsenCoefficients c;
  c.A = 0.5 * (smw * smw + 1.0) / smw;
  c.D = ((1.0 - smw * smw) / smw) / kappa;
  // E = w(n + 1/2) and E' = w'(n + 1/2) + w n' give n' = E'/w - w' E / w^2
  c.F = (2.0 * c.A - c.D * s.omega_dot / s.omega) / s.omega;
  c.G = c.D / s.omega;
  return c;
}

double complexity_particle_form(const ParameterSample& s, double n_mean, double n_dot_value) {
  const auto c = nielsen_coefficients(s);
  return half_arcosh(c.A * (2.0 * n_mean + 1.0) + c.D * n_dot_value);
}

double complexity_energy_form(const ParameterSample& s, double E, double E_dot) {
  const auto c = nielsen_coefficients(s);
  return half_arcosh(c.F * E + c.G * E_dot);
}

double complexity_rate(double q2, double p2, double q2_dot, double p2_dot, double eps_rate) {
  const double sum = q2 + p2;
  if (sum <= 1.0 + eps_rate)
    throw NumericalError(Failure::RateSingular, fmt::format("<q^2> + <p^2> - 1 = {:.3e}", sum - 1.0));
  return 0.5 * (q2_dot + p2_dot) / std::sqrt((sum - 1.0) * (sum + 1.0));
}

RateResult complexity_rate_regularized(double q2, double p2, double q2_dot, double p2_dot, double eps_rate) {
  const double excess = q2 + p2 - 1.0;
  if (excess > eps_rate) return {complexity_rate(q2, p2, q2_dot, p2_dot, eps_rate), RateBranch::Exact};
  if (excess <= 0.0) return {0.0, RateBranch::Limit};
  // d/dt (1/2) sqrt(2x) = x' / (2 sqrt(2x))
  return {(q2_dot + p2_dot) / (2.0 * std::sqrt(2.0 * excess)), RateBranch::LocalModel};
}

MomentRates moment_rates(const ParameterSample& s, const Excitation& e) {
  const auto mom = second_moments(s, e);
  const cplx dz = z_rhs(s, e.z);
  const double kappa = s.log_rate();
  // d ln(1 - |z|^2)/dt = -kappa Re z;  d ln(m omega)/dt = kappa
  const double dlog_plus = 2.0 * (std::conj(1.0 + e.z) * dz).real() / std::norm(1.0 + e.z);
  const double dlog_minus = -2.0 * (std::conj(1.0 - e.z) * dz).real() / std::norm(1.0 - e.z);
  const double dlog_deficit = -kappa * e.z.real();
  return {mom.q2 * (dlog_plus - kappa - dlog_deficit), mom.p2 * (dlog_minus + kappa - dlog_deficit)};
}

}  // namespace tdosc
