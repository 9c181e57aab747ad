#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tdosc/evolution.hpp"

namespace tdosc {

/// Bargmann index of the even (ground-state) sector.
inline constexpr double kEvenSector = 0.25;
inline constexpr double kOddSector = 0.75;

/// Ratio C_S / (<q^2> + <p^2> - 1) under m0 = omega0 = 1. The closed forms give
/// exactly 1/4; verify measures it and reports the value.
inline constexpr double kSpreadMomentPrefactor = 0.25;

/// Operations on a bare Gamma_+ refuse |Gamma_+| >= 1 - 1e-13.
inline constexpr double kUnitCircleGuard = 1e-13;

struct SU11Coefficients {
  double lam = 0.0;   // coefficient of K_+ + K_-
  double lam0 = 1.0;  // coefficient of K_3 = (a a^dag + a^dag a) / 2
};

/// e^{Gamma_+ K_+} e^{Gamma_3 K_3} e^{Gamma_- K_-} restricted to what acts on
/// the lowest-weight state: Gamma_+ and Re Gamma_3.
struct DecoupledPropagator {
  cplx gamma_plus{0.0, 0.0};
  double deficit = 1.0;  // 1 - |Gamma_+|^2, carried for accuracy near the unit circle
  double h = kEvenSector;

  double re_gamma3() const;
};

struct KrylovChain {
  double h = kEvenSector;
  std::size_t n_max = 0;
  std::vector<double> a;  // a_0 .. a_{n_max}
  std::vector<double> b;  // b_0 .. b_{n_max}, b_0 = 0
};

struct KrylovAmplitudes {
  std::vector<double> weights;  // |psi_n|^2
  double tail_bound = 0.0;

  double total() const;
  double mean_index() const;  // sum n |psi_n|^2
};

struct SpreadSample {
  double t = 0.0;
  double C_S = 0.0;
  double dCs_dt = 0.0;
  std::vector<double> amplitudes;
};

struct SpreadFromMoments {
  double value = 0.0;
  double prefactor = kSpreadMomentPrefactor;
};

SU11Coefficients su11_coefficients(const ParameterSample& sample, double m0, double omega0);

/// Gamma_+ = (m0 w0 (1+z) - m w (1-z)) / (m0 w0 (1+z) + m w (1-z)).
DecoupledPropagator gamma_plus_from_z(const ParameterSample& sample, const Excitation& e, double m0,
                                      double omega0, double h = kEvenSector);

/// ln(1 - |Gamma_+|^2).
double re_gamma3(cplx gamma_plus);

/// 2h |Gamma_+|^2 / (1 - |Gamma_+|^2).
double spread_complexity(cplx gamma_plus, double h = kEvenSector);
double spread_complexity(const DecoupledPropagator& u);

/// |psi_n|^2 = (1 - |G|^2)^{2h} |G|^{2n} Gamma(2h + n) / (Gamma(2h) n!).
KrylovAmplitudes krylov_amplitudes(const DecoupledPropagator& u, std::optional<std::size_t> n_max = {});
KrylovAmplitudes krylov_amplitudes(cplx gamma_plus, double h = kEvenSector,
                                   std::optional<std::size_t> n_max = {});

/// a_n = 2 lam0 (h + n), b_n = lam sqrt(n (2h + n - 1)); for h = 1/4 this is
/// a_n = lam0 (2n + 1/2), b_n = lam sqrt(n (n - 1/2)).
KrylovChain lanczos_coefficients(const SU11Coefficients& coeffs, double h, std::size_t n_max);

struct Su2Coefficients {
  double a = 0.0;
  double b = 0.0;
};

/// a_n = gamma (n - j) + delta, b_n = alpha sqrt(n (2j - n + 1)), 0 <= n <= 2j.
Su2Coefficients su2_lanczos(double alpha, double gamma_c, double delta, double j, int n);

/// Whole su(2) chain: a_0..a_{2j} and b_0..b_{2j+1}; the last b closes the chain.
struct Su2Chain {
  std::vector<double> a;
  std::vector<double> b;
};
Su2Chain su2_chain(double alpha, double gamma_c, double delta, double j);

SpreadFromMoments spread_from_moments(double q2, double p2, double prefactor = kSpreadMomentPrefactor);

/// Quartic onset coefficient c in C_S ~ c t^4: (d lambda/dt at 0)^2 / 8.
double early_time_quartic(const ParameterProfile& profile);

/// dC_S/dt from the chain rule through dGamma_+/dt (no moment prefactor involved).
double spread_rate(const ParameterSample& sample, const Excitation& e, double m0, double omega0,
                   double h = kEvenSector);

/// prefactor * (Q' + P').
double spread_rate_from_moments(double q2_dot, double p2_dot, double prefactor = kSpreadMomentPrefactor);

/// Fourth-order finite-difference rate of a uniformly sampled series (>= 5 points).
std::vector<double> spread_rate_series(std::span<const double> t, std::span<const double> c_s);

}  // namespace tdosc
