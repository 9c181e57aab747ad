#pragma once

#include "tdosc/evolution.hpp"
#include "tdosc/profiles.hpp"

namespace tdosc {

/// Exact Caldirola-Kanai solution for m(t) = m0 exp(2 gamma t), omega(t) = omega,
/// started from the ground state. z and <n> do not depend on m0.
struct CKClosedForm {
  DampingRegime regime;
  double gamma = 0.0;
  double omega = 1.0;

  CKClosedForm(double gamma_, double omega_);
  ParameterProfile profile(double m0 = 1.0) const;
};

/// mu(t) with mu(0) = 1, mu'(0) = i omega.
cplx mu_closed(const CKClosedForm& form, double t);
cplx mu_dot_closed(const CKClosedForm& form, double t);

/// Underdamped z = gamma sin(Omega t) / (Omega cos(Omega t) + i omega sin(Omega t)),
/// critical z = i gamma t / (i - gamma t), overdamped uses tanh(Gamma t).
cplx z_closed(const CKClosedForm& form, double t);

double n_mean_closed(const CKClosedForm& form, double t);

/// z together with the exact deficit 1 / (1 + <n>).
Excitation excitation_closed(const CKClosedForm& form, double t);

}  // namespace tdosc
