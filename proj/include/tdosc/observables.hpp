#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tdosc/evolution.hpp"

namespace tdosc {

struct ObservableSample {
  double t = 0.0;
  double n_mean = 0.0;
  double n_dot = 0.0;
  double theta = 0.0;  // arg z in (-pi, pi]; 0 at the vacuum
  double E = 0.0;
  double q2 = 0.0;
  double p2 = 0.0;
  double M = 1.0;  // sqrt(1 - |z|^2)
};

struct SecondMoments {
  double q2 = 0.0;
  double p2 = 0.0;
};

/// Even-level occupation probabilities P_{2k}, k = 0..size()-1.
struct OccupationDistribution {
  std::vector<double> probabilities;
  double tail_bound = 0.0;  // upper bound on the omitted mass

  double total() const;
  double mean_quanta() const;  // sum 2k P_{2k}
};

inline constexpr double kDistributionTail = 1e-12;
inline constexpr double kPhaseEpsilon = 1e-10;
inline constexpr double kDegenerateRate = 1e-12;

double mean_quanta(const Excitation& e);

/// P_{2k} = sqrt(1 - |z|^2) (2k)! |z|^{2k} / ((k!)^2 4^k). Without k_max the
/// series is extended until the tail bound drops below 1e-12 (capped at 2^22 terms).
OccupationDistribution occupation_probabilities(const Excitation& e, std::optional<std::size_t> k_max = {});

/// omega (<n> + 1/2).
double mean_energy(const ParameterSample& sample, const Excitation& e);

double n_dot(const ParameterSample& sample, const Excitation& e);

/// d(arg z)/dt; throws PhaseUndefined at |z| <= eps_phase.
double theta_dot(const ParameterSample& sample, const Excitation& e, double eps_phase = kPhaseEpsilon);

SecondMoments second_moments(const ParameterSample& sample, const Excitation& e);

/// Moments rebuilt from (<n>, d<n>/dt); throws DegenerateBackground when
/// omega_dot/omega + m_dot/m vanishes.
SecondMoments moments_from_n(const ParameterSample& sample, double n_mean, double n_dot);

ObservableSample observe(const ParameterSample& sample, const Excitation& e);

}  // namespace tdosc
