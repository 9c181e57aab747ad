#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tdosc/observables.hpp"
#include "tdosc/profiles.hpp"

namespace tdosc::oracle {

/// State in the even sector |0>, |2>, ..., |2(dim-1)> of the t = 0 oscillator.
struct FockState {
  double t = 0.0;
  Eigen::VectorXcd c;

  std::size_t dim() const { return static_cast<std::size_t>(c.size()); }
  double norm2() const { return c.squaredNorm(); }
  double top_occupancy() const { return std::norm(c[c.size() - 1]); }
};

/// Raw q and p over the full 2 dim level space of the t = 0 oscillator and
/// the even-sector blocks of q^2, p^2 and [q^2, p^2], stored as bands
/// (all three are exactly tridiagonal in the pair index).
struct OperatorMatrices {
  std::size_t dim = 0;
  double s0 = 1.0;  // m0 omega0
  Eigen::MatrixXcd Q;
  Eigen::MatrixXcd P;
  Eigen::VectorXd q2_diag, q2_off;
  Eigen::VectorXd p2_diag, p2_off;
  Eigen::VectorXd comm_off;  // [q^2, p^2] is real antisymmetric: entry (n, n+1)

  /// max |[Q, P] - i| over the block that does not touch the top level.
  double commutator_defect() const;
};

OperatorMatrices build_operators(std::size_t dim, double m0, double omega0);

/// Real symmetric tridiagonal H = diag + off (above and below the diagonal).
struct Tridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;

  Eigen::MatrixXd dense() const;
};

/// Even-sector H(t) = p^2 / 2m + m omega^2 q^2 / 2.
Tridiagonal hamiltonian_matrix(const ParameterSample& sample, const OperatorMatrices& ops);

enum class Scheme { Magnus4, Midpoint };

struct PropagationOptions {
  std::size_t dim = 128;
  double dt = 1e-3;
  Scheme scheme = Scheme::Magnus4;
  double leak_threshold = 1e-10;
};

struct Propagation {
  std::vector<FockState> states;  // one per checkpoint
  std::size_t dim = 0;
  std::size_t steps = 0;
  double max_norm_drift = 0.0;
};

/// Integrates i d/dt c = H(t) c from c = (1, 0, ...) at t = 0 and records the
/// state at each checkpoint. Throws TruncationLeak when |c_{dim-1}|^2 exceeds
/// the threshold after any step.
Propagation propagate(const ParameterProfile& profile, std::span<const double> checkpoints,
                      const PropagationOptions& options = {});

/// As propagate, doubling dim on TruncationLeak until max_dim.
Propagation propagate_escalating(const ParameterProfile& profile, std::span<const double> checkpoints,
                                 PropagationOptions options, std::size_t max_dim);

struct Moments {
  double q2 = 0.0;
  double p2 = 0.0;
  double H = 0.0;
  double H_imag = 0.0;  // imaginary part of <H>, zero up to rounding
};

Moments measure_moments(const FockState& state, const OperatorMatrices& ops, const ParameterSample& sample);

/// Overlaps with the eigenvectors of H(t) built on ops, whose dimension may
/// exceed the state's (a larger eigenbasis keeps the eigenvectors' own
/// truncation error below the state's). Eigenvector k stands for instantaneous
/// level 2k; phase: largest component made real positive. Returns state.dim()
/// probabilities.
OccupationDistribution measure_occupations(const FockState& state, const ParameterSample& sample,
                                           const OperatorMatrices& ops);

/// sum n |c_n|^2 over the pair index.
double measure_spread(const FockState& state);

}  // namespace tdosc::oracle
