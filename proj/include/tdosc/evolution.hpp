#pragma once

#include <complex>
#include <span>
#include <vector>

#include "tdosc/ode.hpp"
#include "tdosc/profiles.hpp"

namespace tdosc {

using cplx = std::complex<double>;

/// Excitation parameter together with its norm deficit 1 - |z|^2.
///
/// The deficit is carried separately because it controls every observable
/// (n = |z|^2 / deficit) and loses all its digits when formed from z once
/// |z| approaches one, as it does on growing-mass backgrounds.
struct Excitation {
  cplx z{0.0, 0.0};
  double deficit = 1.0;

  Excitation() = default;
  Excitation(cplx z_) : z(z_), deficit((1.0 - std::abs(z_)) * (1.0 + std::abs(z_))) {}  // NOLINT
  Excitation(cplx z_, double deficit_) : z(z_), deficit(deficit_) {}

  double abs2() const { return std::norm(z); }
  /// Throws Domain unless the state is normalizable.
  void require_normalizable() const;
};

struct ExcitationState {
  double t = 0.0;
  cplx z{0.0, 0.0};
  double log_norm = 0.0;  // -ln(1 - |z|^2) = ln(1 + <n>)

  Excitation excitation() const { return {z, std::exp(-log_norm)}; }
};

struct ModeFunctionState {
  double t = 0.0;
  cplx mu{1.0, 0.0};
  cplx mu_dot{0.0, 0.0};
};

struct Trajectory {
  std::vector<ExcitationState> samples;
  ode::Tolerances tolerances;
  ode::Stats stats;

  std::size_t size() const { return samples.size(); }
  const ExcitationState& operator[](std::size_t i) const { return samples[i]; }
};

/// dz/dt = -2 i omega z - (1/2)(omega_dot/omega + m_dot/m)(z^2 - 1).
cplx z_rhs(const ParameterSample& sample, cplx z);

/// Mass times frequency over two: the instantaneous-ground-state exponent.
double adiabatic_R(const ParameterSample& sample);

/// n_out equally spaced times covering [0, t_end], endpoints included.
std::vector<double> uniform_grid(double t_end, std::size_t n_out);

/// Riccati integration of z from the ground state z(0) = 0. The log-norm
/// ln(1 + <n>) is integrated alongside (its rate is kappa Re z).
Trajectory integrate_z(const ParameterProfile& profile, std::span<const double> times,
                       ode::Tolerances tol = {});
Trajectory integrate_z(const ParameterProfile& profile, double t_end, ode::Tolerances tol = {},
                       std::size_t n_out = 1000);

/// Mode-function integration of mu'' + (m_dot/m) mu' + omega^2 mu = 0 with
/// mu(0) = 1, mu'(0) = i omega0, mapped to z through R = -i (m/2) mu'/mu.
std::vector<ModeFunctionState> integrate_mode_function(const ParameterProfile& profile,
                                                       std::span<const double> times,
                                                       ode::Tolerances tol, ode::Stats* stats = nullptr);

/// R -> z map for one mode-function sample. Re(2R) is taken as m0 omega0 / |mu|^2,
/// i.e. from the conserved m Im(conj(mu) mu'), which keeps the norm deficit
/// exact when the raw Wronskian would cancel catastrophically.
ExcitationState excitation_from_mode(const ParameterSample& sample, const ModeFunctionState& mode,
                                     double m0_omega0);

Trajectory integrate_mu(const ParameterProfile& profile, std::span<const double> times,
                        ode::Tolerances tol = {});
Trajectory integrate_mu(const ParameterProfile& profile, double t_end, ode::Tolerances tol = {},
                        std::size_t n_out = 1000);

/// m Im(conj(mu) mu'); constant along exact solutions.
double wronskian(const ParameterSample& sample, const ModeFunctionState& mode);

}  // namespace tdosc
