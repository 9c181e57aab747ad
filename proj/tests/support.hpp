#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include <doctest.h>

#include "tdosc/errors.hpp"

namespace testing {

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
inline bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

/// Failure kind raised by f as an int, -1 when nothing is thrown.
inline int failure_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const tdosc::NumericalError& e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

}  // namespace testing

#define CHECK_FAILURE(expr, kind) CHECK(testing::failure_of([&] { (void)(expr); }) == static_cast<int>(kind))
