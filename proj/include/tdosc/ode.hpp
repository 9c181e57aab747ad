#pragma once

// Dormand-Prince 5(4) with PI step-size control. Intermediate output times are
// served by the 4th-order continuous extension, so the output grid never
// constrains the step; only the final time is hit by clipping the step.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc::ode {

struct Tolerances {
  double rel = 1e-10;
  double abs = 1e-12;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// difference between the 5th- and 4th-order weights
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// continuous extension
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace detail

/// Integrates y' = rhs(t, y) from (t0, y0) and records the state at each of
/// `outputs` (non-decreasing, all >= t0). `accept(t, y)` runs after every
/// accepted step and may throw to abort.
template <std::size_t N, class Rhs, class Accept>
std::vector<State<N>> integrate(Rhs&& rhs, double t0, State<N> y0, std::span<const double> outputs,
                                Tolerances tol, Stats& stats, Accept&& accept) {
  using namespace detail;
  std::vector<State<N>> out;
  out.reserve(outputs.size());
  if (outputs.empty()) return out;

  const double span = std::max(outputs.back() - t0, 0.0);
  const double h_floor = 1e-12 * std::max(span, 1e-300);
  const double h_max = span > 0.0 ? span : 1.0;

  auto err_scale = [&](double a, double b) { return tol.abs + tol.rel * std::max(std::abs(a), std::abs(b)); };

  State<N> y = y0;
  double t = t0;
  State<N> k1 = rhs(t, y);
  ++stats.rhs_evals;

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = err_scale(y[i], y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, h_max);
  }

  double err_prev = 1e-4;
  std::size_t next = 0;
  while (next < outputs.size() && outputs[next] <= t) {
    out.push_back(y);
    ++next;
  }

  State<N> k2, k3, k4, k5, k6, k7, tmp, y_new;
  while (next < outputs.size()) {
    const double target = outputs.back();
    bool lands = false;
    double step = h;
    if (t + step >= target) {
      step = target - t;
      lands = true;
    }

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + step * a21 * k1[i];
    k2 = rhs(t + c2 * step, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + step * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * step, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * step, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * step, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(t + step, tmp);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = rhs(t + step, y_new);
    stats.rhs_evals += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e =
          step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double r = e / err_scale(y[i], y_new[i]);
      err += r * r;
    }
    err = std::sqrt(err / N);

    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      ++stats.accepted;
      const double t_new = lands ? target : t + step;
      accept(t_new, y_new);
      if (next < outputs.size() && outputs[next] < t_new) {
        State<N> r3, r4, r5;
        for (std::size_t i = 0; i < N; ++i) {
          const double dy = y_new[i] - y[i];
          r3[i] = step * k1[i] - dy;
          r4[i] = dy - step * k7[i] - r3[i];
          r5[i] = step * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        while (next < outputs.size() && outputs[next] < t_new) {
          const double th = (outputs[next] - t) / step, th1 = 1.0 - th;
          State<N> yi;
          for (std::size_t i = 0; i < N; ++i)
            yi[i] = y[i] + th * ((y_new[i] - y[i]) + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
          out.push_back(yi);
          ++next;
        }
      }
      t = t_new;
      y = y_new;
      k1 = k7;
      while (next < outputs.size() && outputs[next] <= t) {
        out.push_back(y);
        ++next;
      }
      // PI controller (beta = 0.04)
      double fac = 0.9 * std::pow(err, -0.2 + 0.04 * 0.75) * std::pow(err_prev, 0.04);
      fac = std::clamp(fac, 0.2, 10.0);
      err_prev = std::max(err, 1e-4);
      if (!lands || step >= h) h = std::min(step * fac, h_max);
    } else {
      ++stats.rejected;
      h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
    if (h < h_floor)
      throw NumericalError(Failure::StiffnessFailure,
                           fmt::format("step size {:.3e} collapsed below 1e-12 of the span at t={}", h, t));
  }
  return out;
}

}  // namespace tdosc::ode
