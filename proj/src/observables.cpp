#include "tdosc/observables.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc {

namespace {
constexpr std::size_t kMaxTerms = std::size_t{1} << 22;
}

double OccupationDistribution::total() const {
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  return sum;
}

double OccupationDistribution::mean_quanta() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) sum += 2.0 * static_cast<double>(k) * probabilities[k];
  return sum;
}

double mean_quanta(const Excitation& e) {
  e.require_normalizable();
  return e.abs2() / e.deficit;
}

OccupationDistribution occupation_probabilities(const Excitation& e, std::optional<std::size_t> k_max) {
  e.require_normalizable();
  // |z|^2 from the carried deficit near the unit circle keeps the sum consistent with sqrt(deficit)
  const double x = e.deficit < 0.5 ? 1.0 - e.deficit : e.abs2();
  OccupationDistribution d;
  double p = std::sqrt(e.deficit);
  const std::size_t cap = k_max ? *k_max : kMaxTerms;
  d.probabilities.push_back(p);
  // successive ratio x (2k+1)/(2k+2) < x, so the tail after k is below P_{2k} x/(1-x)
  auto bound = [&](double pk) { return x > 0.0 ? pk * x / e.deficit : 0.0; };
  for (std::size_t k = 0; k < cap; ++k) {
    if (!k_max && bound(p) < kDistributionTail) break;
    p *= x * (2.0 * k + 1.0) / (2.0 * k + 2.0);
    d.probabilities.push_back(p);
  }
  d.tail_bound = bound(p);
  return d;
}

double mean_energy(const ParameterSample& s, const Excitation& e) {
  return s.omega * (mean_quanta(e) + 0.5);
}

double n_dot(const ParameterSample& s, const Excitation& e) {
  e.require_normalizable();
  // kappa sqrt(n(n+1)) cos(theta), with sqrt(n(n+1)) = |z| / (1 - |z|^2)
  return s.log_rate() * e.z.real() / e.deficit;
}

double theta_dot(const ParameterSample& s, const Excitation& e, double eps_phase) {
  e.require_normalizable();
  const double r2 = e.abs2();
  if (std::sqrt(r2) <= eps_phase)
    throw NumericalError(Failure::PhaseUndefined, fmt::format("|z| = {} at or below {}", std::sqrt(r2), eps_phase));
  // (2n+1)/sqrt(n(n+1)) sin(theta) = (1 + |z|^2) Im z / |z|^2
  return -2.0 * s.omega - 0.5 * s.log_rate() * (1.0 + r2) * e.z.imag() / r2;
}

SecondMoments second_moments(const ParameterSample& s, const Excitation& e) {
  e.require_normalizable();
  const double smw = s.mass_frequency();
  return {std::norm(1.0 + e.z) / (2.0 * smw * e.deficit), smw * std::norm(1.0 - e.z) / (2.0 * e.deficit)};
}

SecondMoments moments_from_n(const ParameterSample& s, double n_mean, double n_dot_value) {
  const double kappa = s.log_rate();
  if (std::abs(kappa) < kDegenerateRate)
    throw NumericalError(Failure::DegenerateBackground, "omega_dot/omega + m_dot/m vanishes");
  const double smw = s.mass_frequency();
  const double level = 2.0 * n_mean + 1.0;
  const double shift = 2.0 * n_dot_value / kappa;
  return {(level + shift) / (2.0 * smw), 0.5 * smw * (level - shift)};
}

ObservableSample observe(const ParameterSample& s, const Excitation& e) {
  ObservableSample o;
  o.t = s.t;
  o.n_mean = mean_quanta(e);
  o.n_dot = n_dot(s, e);
  o.theta = e.z == cplx(0.0, 0.0) ? 0.0 : std::arg(e.z);
  if (o.theta <= -M_PI) o.theta = M_PI;
  o.E = s.omega * (o.n_mean + 0.5);
  const auto mom = second_moments(s, e);
  o.q2 = mom.q2;
  o.p2 = mom.p2;
  o.M = std::sqrt(e.deficit);
  return o;
}

}  // namespace tdosc
