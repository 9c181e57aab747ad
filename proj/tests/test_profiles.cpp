#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <doctest.h>

#include "support.hpp"
#include "tdosc/profiles.hpp"

using namespace tdosc;

TEST_CASE("caldirola-kanai samples") {
  const auto p = ParameterProfile::caldirola_kanai(1.0, 1.0, 0.5);
  const auto s0 = p.evaluate(0.0);
  CHECK(s0.m == 1.0);
  CHECK(s0.m_dot == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s0.omega == 1.0);
  CHECK(s0.omega_dot == 0.0);

  const auto s1 = p.evaluate(1.0);
  CHECK(s1.m == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(s1.m_dot == doctest::Approx(std::exp(1.0)).epsilon(1e-15));

  for (double t : {0.0, 0.3, 2.0, 7.5, 10.0}) CHECK(testing::rel_close(p.evaluate(t).log_rate(), 1.0, 1e-12));
}

TEST_CASE("constant profile") {
  const auto p = ParameterProfile::constant(1.0, 1.0);
  for (double t : {0.0, 1.0, 123.0}) {
    const auto s = p.evaluate(t);
    CHECK(s.m == 1.0);
    CHECK(s.m_dot == 0.0);
    CHECK(s.omega == 1.0);
    CHECK(s.omega_dot == 0.0);
  }
}

TEST_CASE("initial values are exact for every kind") {
  CHECK(ParameterProfile::caldirola_kanai(2.5, 0.7, 1.3).evaluate(0.0).m == 2.5);
  CHECK(ParameterProfile::caldirola_kanai(2.5, 0.7, 1.3).evaluate(0.0).omega == 0.7);
  const auto tab = ParameterProfile::tabulated({0.0, 0.5, 1.0, 1.5, 2.0}, {1.3, 1.4, 1.2, 1.1, 1.0},
                                               {0.9, 1.0, 1.1, 1.2, 1.3});
  CHECK(tab.evaluate(0.0).m == 1.3);
  CHECK(tab.evaluate(0.0).omega == 0.9);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  const auto p = ParameterProfile::caldirola_kanai(1.0, 1.0, 2.0);
  const double h = 1e-5;
  for (double t : {0.1, 1.0, 3.0}) {
    const double fd = (p.evaluate(t + h).m - p.evaluate(t - h).m) / (2 * h);
    CHECK(testing::close(fd / p.evaluate(t).m_dot, 1.0, 1e-6));
  }
}

TEST_CASE("regime classification") {
  const auto u = classify_regime(0.5, 1.0);
  CHECK(u.regime == Regime::Underdamped);
  CHECK(u.Omega == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  CHECK(testing::rel_close(u.Omega * u.Omega + 0.25, 1.0, 1e-12));

  CHECK(classify_regime(1.0, 1.0).regime == Regime::Critical);

  const auto o = classify_regime(2.0, 1.0);
  CHECK(o.regime == Regime::Overdamped);
  CHECK(o.Gamma_big == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  const auto near = classify_regime(1.0 + 1e-9, 1.0);
  CHECK(near.regime == Regime::Overdamped);
  CHECK(near.near_critical);
  CHECK_FAILURE(classify_regime(-1.0, 1.0), Failure::Domain);
}

TEST_CASE("tabulated profile reproduces an analytic one") {
  const double gamma = 0.5;
  const std::size_t n = 10000;
  std::vector<double> t(n), m(n), w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = 10.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    m[i] = std::exp(2 * gamma * t[i]);
  }
  const auto tab = ParameterProfile::tabulated(t, m, w);
  const auto ck = ParameterProfile::caldirola_kanai(1.0, 1.0, gamma);
  double em = 0.0, edot = 0.0;
  for (int k = 0; k <= 997; ++k) {
    const double tk = 10.0 * k / 997.0;
    const auto a = tab.evaluate(tk);
    const auto b = ck.evaluate(tk);
    em = std::max(em, std::abs(a.m - b.m) / b.m);
    edot = std::max(edot, std::abs(a.m_dot - b.m_dot) / b.m_dot);
  }
  CHECK(em <= 1e-8);
  CHECK(edot <= 1e-5);
}

TEST_CASE("tabulated input validation") {
  CHECK_FAILURE(ParameterProfile::tabulated({0.0, 1.0, 0.5, 2.0}, {1, 1, 1, 1}, {1, 1, 1, 1}), Failure::Domain);
  CHECK_FAILURE(ParameterProfile::tabulated({1.0, 2.0, 3.0, 4.0}, {1, 1, 1, 1}, {1, 1, 1, 1}), Failure::Domain);
  CHECK_FAILURE(ParameterProfile::tabulated({0.0, 1.0, 2.0, 3.0}, {1, -1, 1, 1}, {1, 1, 1, 1}), Failure::Domain);
  const auto tab = ParameterProfile::tabulated({0.0, 1.0, 2.0, 3.0}, {1, 1, 1, 1}, {1, 1, 1, 1});
  CHECK(tab.domain().second == 3.0);
}

TEST_CASE("profile table from csv") {
  const auto path = std::filesystem::temp_directory_path() / "tdosc_profile_test.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "omega,t,m\n";
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.05 * i;
      out << 1.0 + 0.1 * t << "," << t << "," << std::exp(0.2 * t) << "\n";
    }
  }
  const auto p = ParameterProfile::from_csv(path);
  CHECK(p.kind() == ProfileKind::Tabulated);
  const auto s = p.evaluate(1.0);
  CHECK(testing::close(s.omega, 1.1, 1e-12));
  CHECK(testing::close(s.m, std::exp(0.2), 1e-6));
  std::filesystem::remove(path);
}
