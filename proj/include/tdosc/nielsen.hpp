#pragma once

#include <array>

#include "tdosc/evolution.hpp"
#include "tdosc/observables.hpp"

namespace tdosc {

/// Symmetric 2x2 covariance matrix [[g_qq, g_qp], [g_qp, g_pp]] of a pure
/// single-mode Gaussian: g_qq = 2<q^2>, g_qp = <qp + pq>, g_pp = 2<p^2>.
struct CovarianceMatrix {
  double g_qq = 1.0;
  double g_qp = 0.0;
  double g_pp = 1.0;

  double det() const { return g_qq * g_pp - g_qp * g_qp; }
  double trace() const { return g_qq + g_pp; }
};

/// Diagonal symplectic normalizer S (stored as its diagonal) with S G_R S^T = 1.
struct Normalizer {
  double sq = 1.0;
  double sp = 1.0;

  CovarianceMatrix apply(const CovarianceMatrix& g) const {
    return {sq * sq * g.g_qq, sq * sp * g.g_qp, sp * sp * g.g_pp};
  }
};

struct NielsenCoefficients {
  double A = 0.0;
  double D = 0.0;
  double F = 0.0;
  double G = 0.0;
};

struct NielsenSample {
  double t = 0.0;
  double C = 0.0;
  double dC_dt = 0.0;
  NielsenCoefficients coeffs;
};

enum class RateBranch { Exact, LocalModel, Limit };
const char* to_string(RateBranch branch);

struct RateResult {
  double value = 0.0;
  RateBranch branch = RateBranch::Exact;
};

inline constexpr double kRateEpsilon = 1e-9;

/// Covariance of psi ~ exp(-omega_t q^2 / 2); throws NonNormalizable if Re omega_t <= 0.
CovarianceMatrix covariance_of_exponent(cplx omega_t);

/// Ground state of the t = 0 oscillator: diag(1/(m0 w0), m0 w0).
CovarianceMatrix reference_covariance(double m0, double omega0);

/// S for a diagonal reference; throws Domain for a non-diagonal one.
Normalizer normalizer_for(const CovarianceMatrix& reference);

/// m omega (1 - z)/(1 + z), with the real part assembled from the carried norm
/// deficit so it stays accurate when |z| -> 1.
cplx target_exponent(const ParameterSample& sample, const Excitation& e);

/// Covariance-matrix route: C = (1/2) arcosh( tr(S G_T S^T) / 2 ).
double nielsen_complexity(const CovarianceMatrix& reference, cplx target_exponent);
/// Scalar closed form (1/2) arcosh[ (|w_t|^2 + m0^2 w0^2) / (2 m0 w0 Re w_t) ].
double nielsen_complexity(cplx target_exponent, double m0, double omega0);

/// (1/2) arcosh(<q^2> + <p^2>); valid for m0 = omega0 = 1.
double complexity_from_moments(double q2, double p2);

NielsenCoefficients nielsen_coefficients(const ParameterSample& sample);

double complexity_particle_form(const ParameterSample& sample, double n_mean, double n_dot);
double complexity_energy_form(const ParameterSample& sample, double E, double E_dot);

/// (1/2)(Q' + P') / sqrt((Q + P)^2 - 1); throws RateSingular at Q + P <= 1 + eps.
double complexity_rate(double q2, double p2, double q2_dot, double p2_dot, double eps_rate = kRateEpsilon);

/// As complexity_rate, but near coincidence falls back to the local model
/// C ~ (1/2) sqrt(2 (Q + P - 1)) and reports which branch was taken.
RateResult complexity_rate_regularized(double q2, double p2, double q2_dot, double p2_dot,
                                       double eps_rate = kRateEpsilon);

struct MomentRates {
  double q2_dot = 0.0;
  double p2_dot = 0.0;
};

/// Analytic d<q^2>/dt, d<p^2>/dt along the flow of z.
MomentRates moment_rates(const ParameterSample& sample, const Excitation& e);

}  // namespace tdosc
