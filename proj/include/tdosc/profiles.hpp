#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace tdosc {

/// Background m(t), omega(t) and their time derivatives at one instant.
struct ParameterSample {
  double t = 0.0;
  double m = 1.0;
  double m_dot = 0.0;
  double omega = 1.0;
  double omega_dot = 0.0;

  double mass_frequency() const { return m * omega; }
  /// d/dt ln(m omega) = omega_dot/omega + m_dot/m; drives every non-adiabatic term.
  double log_rate() const { return omega_dot / omega + m_dot / m; }
};

enum class ProfileKind { Constant, CaldirolaKanai, Tabulated };

const char* to_string(ProfileKind kind);

/// Cubic spline with clamped ends. The end slopes come from the cubic through
/// the four outermost knots, so the interpolant and its derivative stay
/// fourth/third-order accurate up to the boundary.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double value(double x) const { return eval(x).first; }
  double derivative(double x) const { return eval(x).second; }
  std::pair<double, double> eval(double x) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m2_;  // second derivatives at the knots
};

/// Immutable description of the time-dependent background.
class ParameterProfile {
 public:
  static ParameterProfile constant(double m0, double omega0);
  /// m(t) = m0 exp(2 gamma t), omega(t) = omega.
  static ParameterProfile caldirola_kanai(double m0, double omega, double gamma);
  /// Samples must be strictly increasing in t and include t = 0.
  static ParameterProfile tabulated(std::vector<double> t, std::vector<double> m,
                                    std::vector<double> omega);
  /// CSV with a header naming the columns t, m, omega (any order).
  static ParameterProfile from_csv(const std::filesystem::path& path);

  ParameterSample evaluate(double t) const;

  ProfileKind kind() const { return kind_; }
  double m0() const { return m0_; }
  double omega0() const { return omega0_; }
  double gamma() const { return gamma_; }
  /// Closed interval on which evaluate() is defined.
  std::pair<double, double> domain() const;

 private:
  ParameterProfile() = default;

  ProfileKind kind_ = ProfileKind::Constant;
  double m0_ = 1.0;
  double omega0_ = 1.0;
  double gamma_ = 0.0;
  std::shared_ptr<const CubicSpline> mass_;
  std::shared_ptr<const CubicSpline> frequency_;
};

inline ParameterSample evaluate(const ParameterProfile& profile, double t) {
  return profile.evaluate(t);
}

enum class Regime { Underdamped, Critical, Overdamped };

const char* to_string(Regime regime);

struct DampingRegime {
  Regime regime = Regime::Underdamped;
  double gamma = 0.0;
  double omega = 1.0;
  double Omega = 0.0;      // sqrt(omega^2 - gamma^2), underdamped only
  double Gamma_big = 0.0;  // sqrt(gamma^2 - omega^2), overdamped only
  /// Set when |omega - gamma| is within 1e-6 omega but outside the critical
  /// band; the open-regime closed forms are used and the caller should warn.
  bool near_critical = false;
};

inline constexpr double kCriticalTolerance = 1e-12;
inline constexpr double kNearCriticalBand = 1e-6;

DampingRegime classify_regime(double gamma, double omega);

}  // namespace tdosc
