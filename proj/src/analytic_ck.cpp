#include "tdosc/analytic_ck.hpp"

#include <cmath>

namespace tdosc {

namespace {
const cplx I(0.0, 1.0);
}

CKClosedForm::CKClosedForm(double gamma_, double omega_)
    : regime(classify_regime(gamma_, omega_)), gamma(gamma_), omega(omega_) {}

ParameterProfile CKClosedForm::profile(double m0) const { return ParameterProfile::caldirola_kanai(m0, omega, gamma); }

cplx mu_closed(const CKClosedForm& f, double t) {
  const double g = f.gamma;
  switch (f.regime.regime) {
    case Regime::Underdamped: {
      const double W = f.regime.Omega;
      const cplx a2 = (g + I * f.omega) / W;
      return std::exp(-g * t) * (std::cos(W * t) + a2 * std::sin(W * t));
    }
    case Regime::Critical:
      return std::exp(-g * t) * (1.0 + (g + I * f.omega) * t);
    case Regime::Overdamped: {
      const double G = f.regime.Gamma_big;
      const cplx r = (g + I * f.omega) / G;
      const cplx a1 = 0.5 * (1.0 + r);
      const cplx a2 = 0.5 * (1.0 - r);
      // e^{-gamma t}(a1 e^{Gamma t} + a2 e^{-Gamma t}) without overflowing either exponential
      return std::exp((G - g) * t) * (a1 + a2 * std::exp(-2.0 * G * t));
    }
  }
  return {};
}

cplx mu_dot_closed(const CKClosedForm& f, double t) {
  const double g = f.gamma;
  switch (f.regime.regime) {
    case Regime::Underdamped: {
      const double W = f.regime.Omega;
      const cplx a2 = (g + I * f.omega) / W;
      const double c = std::cos(W * t), s = std::sin(W * t);
      return std::exp(-g * t) * (-g * (c + a2 * s) + W * (a2 * c - s));
    }
    case Regime::Critical: {
      const cplx a2 = g + I * f.omega;
      return std::exp(-g * t) * (a2 - g * (1.0 + a2 * t));
    }
    case Regime::Overdamped: {
      const double G = f.regime.Gamma_big;
      const cplx r = (g + I * f.omega) / G;
      const cplx a1 = 0.5 * (1.0 + r);
      const cplx a2 = 0.5 * (1.0 - r);
      return std::exp((G - g) * t) * ((G - g) * a1 - (G + g) * a2 * std::exp(-2.0 * G * t));
    }
  }
  return {};
}

cplx z_closed(const CKClosedForm& f, double t) {
  const double g = f.gamma;
  switch (f.regime.regime) {
    case Regime::Underdamped: {
      const double W = f.regime.Omega;
      const double s = std::sin(W * t);
      return g * s / (W * std::cos(W * t) + I * f.omega * s);
    }
    case Regime::Critical:
      return I * g * t / (I - g * t);
    case Regime::Overdamped: {
      const double G = f.regime.Gamma_big;
      const double th = std::tanh(G * t);
      return g * th / (G + I * f.omega * th);
    }
  }
  return {};
}

double n_mean_closed(const CKClosedForm& f, double t) {
  const double g = f.gamma;
  switch (f.regime.regime) {
    case Regime::Underdamped: {
      const double r = g * std::sin(f.regime.Omega * t) / f.regime.Omega;
      return r * r;
    }
    case Regime::Critical:
      return g * g * t * t;
    case Regime::Overdamped: {
      const double r = g * std::sinh(f.regime.Gamma_big * t) / f.regime.Gamma_big;
      return r * r;
    }
  }
  return 0.0;
}

Excitation excitation_closed(const CKClosedForm& f, double t) {
  return {z_closed(f, t), 1.0 / (1.0 + n_mean_closed(f, t))};
}

}  // namespace tdosc
