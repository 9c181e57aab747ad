#include "tdosc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc::oracle {

namespace {

using Vec = Eigen::VectorXcd;
const cplx I(0.0, 1.0);

// Hermitian tridiagonal: real diagonal, complex upper band u (lower is conj u).
struct HermitianBand {
  Eigen::VectorXd d;
  Vec u;

  void apply(const Vec& x, Vec& y) const {
    const Eigen::Index n = x.size();
    for (Eigen::Index i = 0; i < n; ++i) y[i] = d[i] * x[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      y[i] += u[i] * x[i + 1];
      y[i + 1] += std::conj(u[i]) * x[i];
    }
  }

  double norm1() const {
    const Eigen::Index n = d.size();
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = std::abs(d[i]);
      if (i > 0) row += std::abs(u[i - 1]);
      if (i + 1 < n) row += std::abs(u[i]);
      best = std::max(best, row);
    }
    return best;
  }
};

// exp(-i M) x by a Taylor series, split into substeps of norm <= 1.
void apply_exponential(const HermitianBand& M, Vec& x) {
  const int substeps = std::max(1, static_cast<int>(std::ceil(M.norm1())));
  const double scale = 1.0 / substeps;
  Vec term(x.size()), next(x.size());
  for (int s = 0; s < substeps; ++s) {
    Vec sum = x;
    term = x;
    const double ref = x.squaredNorm();
    for (int k = 1; k <= 60; ++k) {
      M.apply(term, next);
      term = next * (-I * scale / static_cast<double>(k));
      sum += term;
      if (term.squaredNorm() <= 1e-34 * ref) break;
    }
    x = sum;
  }
}

void band_of(const Eigen::MatrixXd& A, Eigen::VectorXd& diag, Eigen::VectorXd& off) {
  const Eigen::Index n = A.rows();
  diag = A.diagonal();
  off.resize(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) off[i] = A(i, i + 1);
}

struct Coefficients {
  double alpha;  // m omega^2 / 2, multiplies q^2
  double beta;   // 1 / (2m), multiplies p^2
};

Coefficients coefficients(const ParameterSample& s) { return {0.5 * s.m * s.omega * s.omega, 0.5 / s.m}; }

}  // namespace

double OperatorMatrices::commutator_defect() const {
  const Eigen::MatrixXcd C = Q * P - P * Q;
  const Eigen::Index inner = C.rows() - 1;
  const Eigen::MatrixXcd D = C.topLeftCorner(inner, inner) - I * Eigen::MatrixXcd::Identity(inner, inner);
  return D.cwiseAbs().maxCoeff();
}

OperatorMatrices build_operators(std::size_t dim, double m0, double omega0) {
  if (dim < 2) throw NumericalError(Failure::Domain, "oracle dimension must be at least 2");
  OperatorMatrices ops;
  ops.dim = dim;
  ops.s0 = m0 * omega0;
  const Eigen::Index L = static_cast<Eigen::Index>(2 * dim);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(L, L);
  for (Eigen::Index k = 1; k < L; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXd ad = a.transpose();
  ops.Q = ((a + ad) / std::sqrt(2.0 * ops.s0)).cast<cplx>();
  ops.P = I * std::sqrt(0.5 * ops.s0) * (ad - a).cast<cplx>();

  const Eigen::MatrixXcd Q2 = ops.Q * ops.Q;
  const Eigen::MatrixXcd P2 = ops.P * ops.P;
  const Eigen::Index n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd q2(n, n), p2(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      q2(i, j) = Q2(2 * i, 2 * j).real();
      p2(i, j) = P2(2 * i, 2 * j).real();
    }
  band_of(q2, ops.q2_diag, ops.q2_off);
  band_of(p2, ops.p2_diag, ops.p2_off);
  const Eigen::MatrixXd K = q2 * p2 - p2 * q2;
  Eigen::VectorXd unused;
  band_of(K, unused, ops.comm_off);
  return ops;
}

Eigen::MatrixXd Tridiagonal::dense() const {
  const Eigen::Index n = diag.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  H.diagonal() = diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) H(i, i + 1) = H(i + 1, i) = off[i];
  return H;
}

Tridiagonal hamiltonian_matrix(const ParameterSample& s, const OperatorMatrices& ops) {
  const auto [alpha, beta] = coefficients(s);
  return {alpha * ops.q2_diag + beta * ops.p2_diag, alpha * ops.q2_off + beta * ops.p2_off};
}

namespace {

HermitianBand step_generator(const ParameterProfile& profile, const OperatorMatrices& ops, double t, double h,
                             Scheme scheme) {
  HermitianBand M;
  if (scheme == Scheme::Midpoint) {
    const auto H = hamiltonian_matrix(profile.evaluate(t + 0.5 * h), ops);
    M.d = h * H.diag;
    M.u = (h * H.off).cast<cplx>();
    return M;
  }
  const double r = std::sqrt(3.0) / 6.0;
  const auto s1 = profile.evaluate(t + (0.5 - r) * h);
  const auto s2 = profile.evaluate(t + (0.5 + r) * h);
  const auto c1 = coefficients(s1);
  const auto c2 = coefficients(s2);
  const auto H1 = hamiltonian_matrix(s1, ops);
  const auto H2 = hamiltonian_matrix(s2, ops);
  // M = (h/2)(H1 + H2) + i (sqrt(3)/12) h^2 [H1, H2]
  const double w = std::sqrt(3.0) / 12.0 * h * h * (c1.alpha * c2.beta - c1.beta * c2.alpha);
  M.d = 0.5 * h * (H1.diag + H2.diag);
  M.u.resize(M.d.size() - 1);
  for (Eigen::Index i = 0; i < M.u.size(); ++i)
    M.u[i] = cplx(0.5 * h * (H1.off[i] + H2.off[i]), w * ops.comm_off[i]);
  return M;
}

}  // namespace

Propagation propagate(const ParameterProfile& profile, std::span<const double> checkpoints,
                      const PropagationOptions& opt) {
  if (!(opt.dt > 0.0)) throw NumericalError(Failure::Domain, "oracle dt must be positive");
  const auto s0 = profile.evaluate(0.0);
  const OperatorMatrices ops = build_operators(opt.dim, s0.m, s0.omega);
  Propagation out;
  out.dim = opt.dim;
  Vec c = Vec::Zero(static_cast<Eigen::Index>(opt.dim));
  c[0] = 1.0;
  double t = 0.0;
  for (double tc : checkpoints) {
    if (tc < t) throw NumericalError(Failure::Domain, "oracle checkpoints must be non-decreasing and >= 0");
    const double span = tc - t;
    const auto steps = static_cast<std::size_t>(std::ceil(span / opt.dt - 1e-9));
    const double h = steps ? span / static_cast<double>(steps) : 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      const double tk = t + static_cast<double>(k) * h;
      apply_exponential(step_generator(profile, ops, tk, h, opt.scheme), c);
      const double top = std::norm(c[c.size() - 1]);
      if (top > opt.leak_threshold)
        throw NumericalError(Failure::TruncationLeak,
                             fmt::format("|c_{}|^2 = {:.3e} at t = {:.6g} (dim {})", opt.dim - 1, top,
                                         tk + h, opt.dim));
    }
    out.steps += steps;
    t = tc;
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(1.0 - c.squaredNorm()));
    out.states.push_back({t, c});
  }
  return out;
}

Propagation propagate_escalating(const ParameterProfile& profile, std::span<const double> checkpoints,
                                 PropagationOptions opt, std::size_t max_dim) {
  for (;;) {
    try {
      return propagate(profile, checkpoints, opt);
    } catch (const NumericalError& e) {
      if (e.kind() != Failure::TruncationLeak || 2 * opt.dim > max_dim) throw;
      opt.dim *= 2;
    }
  }
}

namespace {

cplx expectation(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, const Vec& c) {
  HermitianBand A{diag, off.cast<cplx>()};
  Vec y(c.size());
  A.apply(c, y);
  return c.dot(y);  // conjugates the first argument
}

}  // namespace

Moments measure_moments(const FockState& state, const OperatorMatrices& ops, const ParameterSample& s) {
  const auto H = hamiltonian_matrix(s, ops);
  const cplx h = expectation(H.diag, H.off, state.c);
  return {expectation(ops.q2_diag, ops.q2_off, state.c).real(), expectation(ops.p2_diag, ops.p2_off, state.c).real(),
          h.real(), h.imag()};
}

OccupationDistribution measure_occupations(const FockState& state, const ParameterSample& s,
                                           const OperatorMatrices& ops) {
  const std::size_t n = state.dim();
  if (ops.dim < n) throw NumericalError(Failure::Domain, "eigenbasis smaller than the state");
  const Tridiagonal H = hamiltonian_matrix(s, ops);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(H.diag, H.off, Eigen::ComputeEigenvectors);
  Eigen::MatrixXd V = eig.eigenvectors();
  OccupationDistribution d;
  d.probabilities.resize(n);
  const auto rows = static_cast<Eigen::Index>(n);
  for (Eigen::Index k = 0; k < rows; ++k) {
    Eigen::Index imax = 0;
    V.col(k).cwiseAbs().maxCoeff(&imax);
    if (V(imax, k) < 0.0) V.col(k) = -V.col(k);
    d.probabilities[static_cast<std::size_t>(k)] =
        std::norm(V.col(k).head(rows).cast<cplx>().dot(state.c));
  }
  d.tail_bound = state.top_occupancy();
  return d;
}

double measure_spread(const FockState& state) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < state.c.size(); ++n) sum += static_cast<double>(n) * std::norm(state.c[n]);
  return sum;
}

}  // namespace tdosc::oracle
