#include "tdosc/krylov.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc {

namespace {

constexpr std::size_t kMaxTerms = std::size_t{1} << 22;
constexpr double kTail = 1e-12;

void guard_unit_circle(cplx g) {
  if (!(std::abs(g) < 1.0 - kUnitCircleGuard))
    throw NumericalError(Failure::Domain, fmt::format("|Gamma_+| = {} too close to the unit circle", std::abs(g)));
}

}  // namespace

double DecoupledPropagator::re_gamma3() const {
  if (!(deficit > 0.0)) throw NumericalError(Failure::Domain, "|Gamma_+| >= 1");
  return std::log(deficit);
}

double KrylovAmplitudes::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double KrylovAmplitudes::mean_index() const {
  double s = 0.0;
  for (std::size_t n = 0; n < weights.size(); ++n) s += static_cast<double>(n) * weights[n];
  return s;
}

SU11Coefficients su11_coefficients(const ParameterSample& s, double m0, double omega0) {
  if (!(s.m > 0.0) || !(s.omega > 0.0) || !(m0 > 0.0) || !(omega0 > 0.0))
    throw NumericalError(Failure::Domain, "su11_coefficients needs positive masses and frequencies");
  const double s0 = m0 * omega0;
  const double smw = s.mass_frequency();
  const double den = 2.0 * s0 * s.m;
  return {(smw - s0) * (smw + s0) / den, (smw * smw + s0 * s0) / den};
}

DecoupledPropagator gamma_plus_from_z(const ParameterSample& s, const Excitation& e, double m0, double omega0,
                                      double h) {
  e.require_normalizable();
  const double s0 = m0 * omega0;
  const cplx A = s0 * (1.0 + e.z);
  const cplx B = s.mass_frequency() * (1.0 - e.z);
  const double den = std::norm(A + B);
  // 1 - |Gamma|^2 = 4 Re(A conj B) / |A + B|^2 and Re(A conj B) = s0 m w (1 - |z|^2)
  return {(A - B) / (A + B), 4.0 * s0 * s.mass_frequency() * e.deficit / den, h};
}

double re_gamma3(cplx gamma_plus) {
  if (!(std::abs(gamma_plus) < 1.0)) throw NumericalError(Failure::Domain, "|Gamma_+| >= 1");
  return std::log1p(-std::norm(gamma_plus));
}

double spread_complexity(cplx gamma_plus, double h) {
  guard_unit_circle(gamma_plus);
  const double x = std::norm(gamma_plus);
  return 2.0 * h * x / (1.0 - x);
}

double spread_complexity(const DecoupledPropagator& u) {
  if (!(u.deficit > 0.0)) throw NumericalError(Failure::Domain, "|Gamma_+| >= 1");
  return 2.0 * u.h * std::norm(u.gamma_plus) / u.deficit;
}

KrylovAmplitudes krylov_amplitudes(const DecoupledPropagator& u, std::optional<std::size_t> n_max) {
  if (!(u.deficit > 0.0)) throw NumericalError(Failure::Domain, "|Gamma_+| >= 1");
  // near the unit circle take |Gamma|^2 from the carried deficit so the weights
  // stay normalized against the (1 - |Gamma|^2)^{2h} prefactor
  const double x = u.deficit < 0.5 ? 1.0 - u.deficit : std::norm(u.gamma_plus);
  const double two_h = 2.0 * u.h;
  KrylovAmplitudes amp;
  double w = std::pow(u.deficit, two_h);
  amp.weights.push_back(w);
  // ratio of consecutive weights is x (2h + n)/(n + 1); for 2h <= 1 it never exceeds x
  auto bound = [&](double wn, std::size_t n) {
    if (x == 0.0) return 0.0;
    const double r = x * std::max(1.0, (two_h + n + 1.0) / (n + 2.0));
    return r < 1.0 ? wn * r / (1.0 - r) : HUGE_VAL;
  };
  const std::size_t cap = n_max ? *n_max : kMaxTerms;
  std::size_t n = 0;
  for (; n < cap; ++n) {
    if (!n_max && bound(w, n) < kTail) break;
    w *= x * (two_h + n) / (n + 1.0);
    amp.weights.push_back(w);
  }
  amp.tail_bound = bound(w, n);
  return amp;
}

KrylovAmplitudes krylov_amplitudes(cplx gamma_plus, double h, std::optional<std::size_t> n_max) {
  guard_unit_circle(gamma_plus);
  return krylov_amplitudes(DecoupledPropagator{gamma_plus, 1.0 - std::norm(gamma_plus), h}, n_max);
}

KrylovChain lanczos_coefficients(const SU11Coefficients& c, double h, std::size_t n_max) {
  if (n_max < 1) throw NumericalError(Failure::Domain, "lanczos_coefficients needs n_max >= 1");
  KrylovChain chain;
  chain.h = h;
  chain.n_max = n_max;
  chain.a.resize(n_max + 1);
  chain.b.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double k = static_cast<double>(n);
    chain.a[n] = 2.0 * c.lam0 * (h + k);
    chain.b[n] = c.lam * std::sqrt(k * (2.0 * h + k - 1.0));
  }
  chain.b[0] = 0.0;
  return chain;
}

namespace {

void check_spin(double j) {
  const double twice = 2.0 * j;
  if (!(j >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12)
    throw NumericalError(Failure::Domain, fmt::format("spin j = {} is not a non-negative half-integer", j));
}

double su2_offdiag(double alpha, double j, int n) { return alpha * std::sqrt(n * (2.0 * j - n + 1.0)); }

}  // namespace

Su2Coefficients su2_lanczos(double alpha, double gamma_c, double delta, double j, int n) {
  check_spin(j);
  const int top = static_cast<int>(std::lround(2.0 * j));
  if (n < 0 || n > top) throw std::out_of_range(fmt::format("su(2) index {} outside [0, {}]", n, top));
  return {gamma_c * (n - j) + delta, su2_offdiag(alpha, j, n)};
}

Su2Chain su2_chain(double alpha, double gamma_c, double delta, double j) {
  check_spin(j);
  const int top = static_cast<int>(std::lround(2.0 * j));
  Su2Chain chain;
  for (int n = 0; n <= top; ++n) {
    const auto c = su2_lanczos(alpha, gamma_c, delta, j, n);
    chain.a.push_back(c.a);
    chain.b.push_back(c.b);
  }
  chain.b.push_back(su2_offdiag(alpha, j, top + 1));
  return chain;
}

SpreadFromMoments spread_from_moments(double q2, double p2, double prefactor) {
  const double sum = q2 + p2;
  if (sum < 1.0 - 1e-12)
    throw NumericalError(Failure::Domain, fmt::format("<q^2> + <p^2> = {} is below 1", sum));
  return {prefactor * std::max(sum - 1.0, 0.0), prefactor};
}

double early_time_quartic(const ParameterProfile& profile) {
  // lambda = (s^2 - s0^2) / (2 s0 m) with s = m omega; at t = 0, s = s0 so
  // d lambda/dt = s_dot / m0 = omega0 kappa0
  const ParameterSample s = profile.evaluate(0.0);
  const double lam_dot = s.omega * s.log_rate();
  return lam_dot * lam_dot / 8.0;
}

double spread_rate(const ParameterSample& s, const Excitation& e, double m0, double omega0, double h) {
  const auto u = gamma_plus_from_z(s, e, m0, omega0, h);
  const double s0 = m0 * omega0;
  const double smw = s.mass_frequency();
  const double kappa = s.log_rate();
  const cplx dz = z_rhs(s, e.z);
  const cplx sum = s0 * (1.0 + e.z) + smw * (1.0 - e.z);
  const cplx dsum = s0 * dz + smw * kappa * (1.0 - e.z) - smw * dz;
  // C_S = 2h (1/D - 1) with D = 4 s0 m w (1 - |z|^2) / |A + B|^2; differentiating
  // ln D keeps full precision when |Gamma_+| -> 1, where d|Gamma_+|^2/dt cancels
  const double dlog = kappa - kappa * e.z.real() - 2.0 * (std::conj(sum) * dsum).real() / std::norm(sum);
  return -2.0 * h * dlog / u.deficit;
}

double spread_rate_from_moments(double q2_dot, double p2_dot, double prefactor) {
  return prefactor * (q2_dot + p2_dot);
}

std::vector<double> spread_rate_series(std::span<const double> t, std::span<const double> f) {
  const std::size_t n = t.size();
  if (n < 5 || f.size() != n) throw NumericalError(Failure::Domain, "rate series needs >= 5 matching samples");
  const double h = (t[n - 1] - t[0]) / static_cast<double>(n - 1);
  std::vector<double> d(n);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
  return d;
}

}  // namespace tdosc
