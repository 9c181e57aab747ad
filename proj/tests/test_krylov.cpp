#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "reference_values.hpp"
#include "support.hpp"
#include "tdosc/analytic_ck.hpp"
#include "tdosc/evolution.hpp"
#include "tdosc/krylov.hpp"
#include "tdosc/nielsen.hpp"
#include "tdosc/observables.hpp"

using namespace tdosc;

namespace {

ParameterSample sample_with(double m, double omega) {
  ParameterSample s;
  s.m = m;
  s.omega = omega;
  return s;
}

}  // namespace

TEST_CASE("su(1,1) coefficients") {
  const auto c0 = su11_coefficients(ParameterSample{}, 1.0, 1.0);
  CHECK(c0.lam == 0.0);
  CHECK(c0.lam0 == 1.0);

  const auto c1 = su11_coefficients(ParameterProfile::caldirola_kanai(1.0, 1.0, 0.5).evaluate(1.0), 1.0, 1.0);
  CHECK(c1.lam == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(c1.lam0 == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));

  const auto c2 = su11_coefficients(sample_with(2.0, 1.0), 1.0, 1.0);
  CHECK(c2.lam == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(c2.lam0 == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(c2.lam0 >= std::abs(c2.lam));
}

TEST_CASE("gamma_plus from z") {
  const cplx z{0.3, -0.2};
  CHECK(std::abs(gamma_plus_from_z(ParameterSample{}, Excitation(z), 1.0, 1.0).gamma_plus - z) < 1e-15);
  CHECK(std::abs(gamma_plus_from_z(sample_with(3.0, 1.0), Excitation(0.0), 1.0, 1.0).gamma_plus - cplx(-0.5)) < 1e-15);

  // small t: Gamma_+ ~ -i gamma t^2
  const CKClosedForm form(0.5, 1.0);
  const double t = 1e-3;
  const auto u = gamma_plus_from_z(form.profile().evaluate(t), excitation_closed(form, t), 1.0, 1.0);
  CHECK(testing::close(u.gamma_plus.real() / (0.5 * t * t), 0.0, 1e-2));
  CHECK(testing::rel_close(u.gamma_plus.imag(), -0.5 * t * t, 1e-2));

  const auto r = gamma_plus_from_z(ParameterProfile::caldirola_kanai(1.0, 1.0, 0.5).evaluate(1.0),
                                   Excitation(cplx(ref::UD_T1.z_re, ref::UD_T1.z_im)), 1.0, 1.0);
  CHECK(std::abs(r.gamma_plus - cplx(ref::UD_T1.gp_re, ref::UD_T1.gp_im)) < 1e-14);
  CHECK(testing::close(r.re_gamma3(), re_gamma3(r.gamma_plus), 1e-12));
}

TEST_CASE("Re Gamma_3") {
  CHECK(re_gamma3(0.0) == 0.0);
  CHECK(re_gamma3(std::tanh(1.0)) == doctest::Approx(-2 * std::log(std::cosh(1.0))).epsilon(1e-14));
  CHECK(re_gamma3(std::sqrt(0.5)) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
  CHECK_FAILURE(re_gamma3(1.0), Failure::Domain);
}

TEST_CASE("spread complexity") {
  CHECK(spread_complexity(0.0) == 0.0);
  CHECK(spread_complexity(0.5) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK_FAILURE(spread_complexity(cplx(1.0 - 1e-14)), Failure::Domain);
  CHECK(testing::rel_close(spread_complexity(cplx(ref::UD_T1.gp_re, ref::UD_T1.gp_im)), ref::UD_T1.CS, 1e-13));
}

TEST_CASE("krylov amplitudes") {
  CHECK(krylov_amplitudes(0.0).weights[0] == 1.0);
  const auto a = krylov_amplitudes(cplx(std::sqrt(0.5)), kEvenSector, 3);
  CHECK(a.weights[0] == doctest::Approx(0.7071067811865476).epsilon(1e-14));
  CHECK(a.weights[1] == doctest::Approx(0.1767766952966369).epsilon(1e-14));
  for (double r : {0.2, 0.7, 0.99, 0.9999}) {
    const auto full = krylov_amplitudes(cplx(0.0, r));
    CHECK(std::abs(full.total() - 1.0) <= 1e-10);
    CHECK(testing::rel_close(full.mean_index(), spread_complexity(cplx(0.0, r)), 1e-8));
  }
  // odd sector follows the same series with h = 3/4
  const auto odd = krylov_amplitudes(cplx(0.6), kOddSector);
  CHECK(std::abs(odd.total() - 1.0) <= 1e-10);
}

TEST_CASE("lanczos coefficients") {
  const auto c = lanczos_coefficients({0.0, 1.0}, kEvenSector, 4);
  CHECK(c.a[0] == 0.5);
  CHECK(c.a[1] == 2.5);
  for (double b : c.b) CHECK(b == 0.0);

  const auto d = lanczos_coefficients({1.0, 1.0}, kEvenSector, 4);
  CHECK(d.b[0] == 0.0);
  CHECK(d.b[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d.b[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  const auto ck = su11_coefficients(ParameterProfile::caldirola_kanai(1.0, 1.0, 0.5).evaluate(1.0), 1.0, 1.0);
  const auto e = lanczos_coefficients(ck, kEvenSector, 10);
  for (std::size_t n = 0; n <= 10; ++n) {
    const double k = static_cast<double>(n);
    CHECK(testing::rel_close(e.a[n], std::cosh(1.0) * (2 * k + 0.5), 1e-14));
    CHECK(testing::rel_close(e.b[n], std::sinh(1.0) * std::sqrt(k * (k - 0.5)), 1e-14));
    if (n > 0) CHECK(e.a[n] > e.a[n - 1]);
  }
  CHECK_FAILURE(lanczos_coefficients({1.0, 1.0}, kEvenSector, 0), Failure::Domain);
}

TEST_CASE("su(2) chain") {
  const auto a = su2_lanczos(1.0, 0.0, 0.0, 0.5, 1);
  CHECK(a.a == 0.0);
  CHECK(a.b == 1.0);
  const auto b = su2_lanczos(2.0, 1.0, 0.0, 1.0, 1);
  CHECK(b.a == 0.0);
  CHECK(b.b == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(su2_lanczos(3.0, 0.7, 0.2, 2.0, 0).b == 0.0);
  for (double j : {0.5, 1.0, 1.5, 5.0}) {
    const auto chain = su2_chain(1.3, 0.4, 0.1, j);
    CHECK(chain.a.size() == static_cast<std::size_t>(2 * j + 1));
    CHECK(chain.b.back() == 0.0);
  }
  CHECK_THROWS_AS(su2_lanczos(1.0, 1.0, 0.0, 1.0, 3), std::out_of_range);
  CHECK_FAILURE(su2_chain(1.0, 1.0, 0.0, 0.3), Failure::Domain);
}

TEST_CASE("spread complexity from the moments") {
  CHECK(spread_from_moments(0.5, 0.5).value == 0.0);
  // the measured constant: C_S = (Q + P - 1) / 4 along every regime
  for (const auto& p : {ref::UD_T1, ref::CR_T2, ref::OD_T05}) {
    CAPTURE(p.gamma);
    CHECK(testing::rel_close(spread_from_moments(p.q2, p.p2).value, p.CS, 1e-13));
    CHECK(testing::rel_close(p.CS / std::pow(std::sinh(p.C), 2), 0.5, 1e-13));
  }
}

TEST_CASE("early-time quartic coefficient") {
  CHECK(early_time_quartic(ParameterProfile::constant(1.0, 1.0)) == 0.0);
  for (double g : {0.5, 1.0, 2.0}) {
    const auto p = ParameterProfile::caldirola_kanai(1.0, 1.0, g);
    CHECK(early_time_quartic(p) == doctest::Approx(g * g / 2).epsilon(1e-14));
  }
  // matches the closed-form series C_S ~ gamma^2 t^4 / 2
  const CKClosedForm form(0.5, 1.0);
  const double t = 2e-3;
  const auto u = gamma_plus_from_z(form.profile().evaluate(t), excitation_closed(form, t), 1.0, 1.0);
  CHECK(testing::rel_close(spread_complexity(u) / std::pow(t, 4), 0.125, 1e-2));
}

TEST_CASE("spread rate") {
  CHECK(spread_rate(ParameterSample{}, Excitation(0.0), 1.0, 1.0) == 0.0);
  for (double g : {0.5, 1.0, 2.0}) {
    CAPTURE(g);
    const CKClosedForm form(g, 1.0);
    const auto p = form.profile();
    auto cs = [&](double t) { return spread_complexity(gamma_plus_from_z(p.evaluate(t), excitation_closed(form, t), 1.0, 1.0)); };
    const double h = 1e-3;
    for (double t : {0.1, 1.0, 4.0}) {
      const double fd = (cs(t - 2 * h) - 8 * cs(t - h) + 8 * cs(t + h) - cs(t + 2 * h)) / (12 * h);
      const double r = spread_rate(p.evaluate(t), excitation_closed(form, t), 1.0, 1.0);
      CHECK(std::abs(r - fd) <= 1e-6 * std::max(1.0, std::abs(r)));
      // moment route with the prefactor 1/4
      const auto mr = moment_rates(p.evaluate(t), excitation_closed(form, t));
      CHECK(testing::rel_close(spread_rate_from_moments(mr.q2_dot, mr.p2_dot), r, 1e-9));
    }
  }
  // small t: C_S ~ gamma^2 t^4 / 2 with rate 2 gamma^2 t^3
  const CKClosedForm form(0.5, 1.0);
  const double t = 1e-2;
  CHECK(testing::rel_close(spread_rate(form.profile().evaluate(t), excitation_closed(form, t), 1.0, 1.0),
                           2 * 0.25 * std::pow(t, 3), 1e-2));
}

TEST_CASE("rate series") {
  std::vector<double> t(41), f(41), flat(41, 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = 0.05 * static_cast<double>(i);
    f[i] = std::pow(t[i], 4);
  }
  const auto d = spread_rate_series(t, f);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(testing::close(d[i], 4 * std::pow(t[i], 3), 1e-10));
  for (double x : spread_rate_series(t, flat)) CHECK(x == 0.0);
  CHECK_FAILURE(spread_rate_series(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 2}), Failure::Domain);
}
