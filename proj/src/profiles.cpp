#include "tdosc/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc {

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Constant: return "constant";
    case ProfileKind::CaldirolaKanai: return "caldirola_kanai";
    case ProfileKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Underdamped: return "underdamped";
    case Regime::Critical: return "critical";
    case Regime::Overdamped: return "overdamped";
  }
  return "unknown";
}

namespace {

// Slope at x[0] of the cubic interpolating the first four knots.
double end_slope(const double* x, const double* y) {
  double slope = 0.0;
  for (int j = 0; j < 4; ++j) {
    // d/dx of the j-th Lagrange basis polynomial at x[0]
    double denom = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != j) denom *= x[j] - x[k];
    double num = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      double prod = 1.0;
      for (int l = 0; l < 4; ++l)
        if (l != j && l != k) prod *= x[0] - x[l];
      num += prod;
    }
    slope += y[j] * num / denom;
  }
  return slope;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 4 || y_.size() != n)
    throw NumericalError(Failure::Domain, "cubic spline needs at least 4 matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw NumericalError(Failure::Domain, "spline abscissae must be strictly increasing");

  const double d0 = end_slope(x_.data(), y_.data());
  double xr[4], yr[4];
  for (int j = 0; j < 4; ++j) {
    xr[j] = x_[n - 1 - j];
    yr[j] = y_[n - 1 - j];
  }
  const double dn = end_slope(xr, yr);

  // Clamped-spline moment equations, solved with the Thomas algorithm.
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
  const double h0 = x_[1] - x_[0];
  diag[0] = 2.0 * h0;
  upper[0] = h0;
  rhs[0] = 6.0 * ((y_[1] - y_[0]) / h0 - d0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    lower[i] = hl;
    diag[i] = 2.0 * (hl + hr);
    upper[i] = hr;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
  }
  const double hn = x_[n - 1] - x_[n - 2];
  lower[n - 1] = hn;
  diag[n - 1] = 2.0 * hn;
  rhs[n - 1] = 6.0 * (dn - (y_[n - 1] - y_[n - 2]) / hn);

  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m2_.assign(n, 0.0);
  m2_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m2_[i] = (rhs[i] - upper[i] * m2_[i + 1]) / diag[i];
}

std::pair<double, double> CubicSpline::eval(double x) const {
  if (x < x_.front() || x > x_.back())
    throw NumericalError(Failure::Domain,
                         fmt::format("t={} outside tabulated span [{}, {}]", x, x_.front(), x_.back()));
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  if (i >= x_.size() - 1) i = x_.size() - 2;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  const double value =
      a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m2_[i] + (b * b * b - b) * m2_[i + 1]) * h * h / 6.0;
  const double slope = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m2_[i] +
                       (3.0 * b * b - 1.0) / 6.0 * h * m2_[i + 1];
  return {value, slope};
}

ParameterProfile ParameterProfile::constant(double m0, double omega0) {
  if (!(m0 > 0.0) || !(omega0 > 0.0))
    throw NumericalError(Failure::Domain, "mass and frequency must be positive");
  ParameterProfile p;
  p.kind_ = ProfileKind::Constant;
  p.m0_ = m0;
  p.omega0_ = omega0;
  return p;
}

ParameterProfile ParameterProfile::caldirola_kanai(double m0, double omega, double gamma) {
  if (!(m0 > 0.0) || !(omega > 0.0))
    throw NumericalError(Failure::Domain, "mass and frequency must be positive");
  if (!(gamma >= 0.0)) throw NumericalError(Failure::Domain, "damping must be non-negative");
  ParameterProfile p;
  p.kind_ = ProfileKind::CaldirolaKanai;
  p.m0_ = m0;
  p.omega0_ = omega;
  p.gamma_ = gamma;
  return p;
}

ParameterProfile ParameterProfile::tabulated(std::vector<double> t, std::vector<double> m,
                                             std::vector<double> omega) {
  if (t.size() != m.size() || t.size() != omega.size())
    throw NumericalError(Failure::Domain, "tabulated columns differ in length");
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!(m[i] > 0.0) || !(omega[i] > 0.0))
      throw NumericalError(Failure::Domain, fmt::format("non-positive m or omega at t={}", t[i]));
  if (t.empty() || t.front() > 0.0 || t.back() < 0.0)
    throw NumericalError(Failure::Domain, "tabulated profile must cover t = 0");
  ParameterProfile p;
  p.kind_ = ProfileKind::Tabulated;
  p.mass_ = std::make_shared<const CubicSpline>(t, std::move(m));
  p.frequency_ = std::make_shared<const CubicSpline>(std::move(t), std::move(omega));
  p.m0_ = p.mass_->value(0.0);
  p.omega0_ = p.frequency_->value(0.0);
  return p;
}

ParameterProfile ParameterProfile::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NumericalError(Failure::Domain, "cannot open profile table " + path.string());

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
  };

  std::string line;
  int col_t = -1, col_m = -1, col_w = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
      if (cells[i] == "t") col_t = i;
      if (cells[i] == "m") col_m = i;
      if (cells[i] == "omega") col_w = i;
    }
    break;
  }
  if (col_t < 0 || col_m < 0 || col_w < 0)
    throw NumericalError(Failure::Domain, "profile table needs columns t, m, omega");

  std::vector<double> t, m, w;
  const int width = std::max({col_t, col_m, col_w}) + 1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    if (static_cast<int>(cells.size()) < width)
      throw NumericalError(Failure::Domain, "short row in profile table: " + line);
    t.push_back(std::stod(cells[col_t]));
    m.push_back(std::stod(cells[col_m]));
    w.push_back(std::stod(cells[col_w]));
  }
  return tabulated(std::move(t), std::move(m), std::move(w));
}

ParameterSample ParameterProfile::evaluate(double t) const {
  ParameterSample s;
  s.t = t;
  switch (kind_) {
    case ProfileKind::Constant:
      s.m = m0_;
      s.omega = omega0_;
      break;
    case ProfileKind::CaldirolaKanai:
      s.m = m0_ * std::exp(2.0 * gamma_ * t);
      s.m_dot = 2.0 * gamma_ * s.m;
      s.omega = omega0_;
      break;
    case ProfileKind::Tabulated: {
      const auto [m, m_dot] = mass_->eval(t);
      const auto [w, w_dot] = frequency_->eval(t);
      if (!(m > 0.0) || !(w > 0.0))
        throw NumericalError(Failure::Domain, fmt::format("interpolated m or omega non-positive at t={}", t));
      s.m = m;
      s.m_dot = m_dot;
      s.omega = w;
      s.omega_dot = w_dot;
      break;
    }
  }
  return s;
}

std::pair<double, double> ParameterProfile::domain() const {
  if (kind_ == ProfileKind::Tabulated) return {mass_->front(), mass_->back()};
  return {-HUGE_VAL, HUGE_VAL};
}

DampingRegime classify_regime(double gamma, double omega) {
  if (!(gamma >= 0.0) || !(omega > 0.0))
    throw NumericalError(Failure::Domain, "classify_regime needs gamma >= 0 and omega > 0");
  DampingRegime r;
  r.gamma = gamma;
  r.omega = omega;
  const double gap = std::abs(omega - gamma);
  if (gap <= kCriticalTolerance * omega) {
    r.regime = Regime::Critical;
    return r;
  }
  r.near_critical = gap <= kNearCriticalBand * omega;
  // factored forms keep the small-gap case accurate
  if (omega > gamma) {
    r.regime = Regime::Underdamped;
    r.Omega = std::sqrt((omega - gamma) * (omega + gamma));
  } else {
    r.regime = Regime::Overdamped;
    r.Gamma_big = std::sqrt((gamma - omega) * (gamma + omega));
  }
  return r;
}

}  // namespace tdosc
