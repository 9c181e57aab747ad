#include <cmath>
#include <vector>

#include <doctest.h>

#include "reference_values.hpp"
#include "support.hpp"
#include "tdosc/analytic_ck.hpp"
#include "tdosc/evolution.hpp"
#include "tdosc/nielsen.hpp"
#include "tdosc/observables.hpp"

using namespace tdosc;

namespace {

struct FourForms {
  double covariance, moments, particle, energy;
};

FourForms four_forms(const CKClosedForm& form, double t) {
  const auto p = form.profile();
  const auto s = p.evaluate(t);
  const auto e = excitation_closed(form, t);
  const auto mom = second_moments(s, e);
  const double n = mean_quanta(e);
  const double nd = n_dot(s, e);
  // E' = w' (n + 1/2) + w n'
  const double E = mean_energy(s, e);
  const double Ed = s.omega_dot * (n + 0.5) + s.omega * nd;
  return {nielsen_complexity(reference_covariance(1.0, 1.0), target_exponent(s, e)),
          complexity_from_moments(mom.q2, mom.p2), complexity_particle_form(s, n, nd),
          complexity_energy_form(s, E, Ed)};
}

}  // namespace

TEST_CASE("covariance of the exponent") {
  const auto a = covariance_of_exponent(1.0);
  CHECK(a.g_qq == 1.0);
  CHECK(a.g_qp == 0.0);
  CHECK(a.g_pp == 1.0);
  const auto b = covariance_of_exponent(cplx(1.0, 1.0));
  CHECK(b.g_qq == 1.0);
  CHECK(b.g_qp == -1.0);
  CHECK(b.g_pp == 2.0);
  CHECK(b.det() == 1.0);
  const auto c = covariance_of_exponent(2.0);
  CHECK(c.g_qq == 0.5);
  CHECK(c.g_pp == 2.0);
  CHECK_FAILURE(covariance_of_exponent(cplx(0.0, 1.0)), Failure::NonNormalizable);
}

TEST_CASE("target exponent") {
  const ParameterSample unit;
  CHECK(std::abs(target_exponent(unit, Excitation(0.0)) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(target_exponent(unit, Excitation(0.5)) - cplx(1.0 / 3.0)) < 1e-15);
  CHECK(std::abs(target_exponent(unit, Excitation(cplx(0.0, 0.5))) - cplx(0.6, -0.8)) < 1e-15);
}

TEST_CASE("reference normalization is exact") {
  for (auto [m0, w0] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.3, 7.0}}) {
    const auto ref = reference_covariance(m0, w0);
    const auto g = normalizer_for(ref).apply(ref);
    CHECK(g.g_qq == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.g_qp == 0.0);
    CHECK(g.g_pp == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_FAILURE(normalizer_for({1.0, 0.1, 1.0}), Failure::Domain);
}

TEST_CASE("nielsen complexity values") {
  const auto r = reference_covariance(1.0, 1.0);
  CHECK(nielsen_complexity(r, 1.0) == 0.0);
  CHECK(nielsen_complexity(r, std::exp(-2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nielsen_complexity(r, std::exp(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nielsen_complexity(cplx(std::exp(2.0)), 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // general reference: the two routes agree
  const cplx w{0.7, -0.4};
  CHECK(testing::close(nielsen_complexity(reference_covariance(2.0, 0.5), w), nielsen_complexity(w, 2.0, 0.5), 1e-14));
}

TEST_CASE("moment form") {
  CHECK(complexity_from_moments(0.5, 0.5) == 0.0);
  CHECK(complexity_from_moments(std::cosh(2.0) / 2, std::cosh(2.0) / 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FAILURE(complexity_from_moments(0.4, 0.4), Failure::Domain);

  // small t: q2 + p2 = 1 + 2 gamma^2 t^4 gives C ~ gamma t^2
  const double g = 0.5, t = 1e-3;
  CHECK(testing::rel_close(complexity_from_moments(0.5, 0.5 + 2 * g * g * std::pow(t, 4)), g * t * t, 1e-6));
}

TEST_CASE("reference values of the complexity") {
  const auto p = ParameterProfile::caldirola_kanai(1.0, 1.0, 0.5);
  const auto e = integrate_z(p, std::vector<double>{0.0, 1.0})[1].excitation();
  const auto s = p.evaluate(1.0);
  CHECK(testing::close(nielsen_complexity(reference_covariance(1.0, 1.0), target_exponent(s, e)), ref::UD_T1.C, 1e-9));
}

TEST_CASE("four forms agree") {
  const CKClosedForm forms[] = {CKClosedForm(0.5, 1.0), CKClosedForm(1.0, 1.0), CKClosedForm(2.0, 1.0)};
  for (const auto& form : forms) {
    for (double t : {0.01, 0.5, 1.0, 2.0, 5.0}) {
      CAPTURE(form.gamma);
      CAPTURE(t);
      const auto f = four_forms(form, t);
      CHECK(testing::close(f.moments, f.covariance, 1e-10));
      CHECK(testing::close(f.particle, f.covariance, 1e-10));
      CHECK(testing::close(f.energy, f.covariance, 1e-10));
    }
  }
  const auto origin = four_forms(CKClosedForm(0.5, 1.0), 0.0);
  CHECK(origin.covariance == 0.0);
  CHECK(origin.particle == 0.0);
  CHECK(origin.energy == 0.0);
}

TEST_CASE("particle and energy forms refuse a static background") {
  const ParameterSample unit;
  CHECK_FAILURE(nielsen_coefficients(unit), Failure::DegenerateBackground);
  CHECK_FAILURE(complexity_particle_form(unit, 0.0, 0.0), Failure::DegenerateBackground);
}

TEST_CASE("covariance determinant stays one") {
  const CKClosedForm form(2.0, 1.0);
  const auto p = form.profile();
  for (double t : {0.1, 1.0, 3.0, 6.0}) {
    const auto G = normalizer_for(reference_covariance(1.0, 1.0))
                       .apply(covariance_of_exponent(target_exponent(p.evaluate(t), excitation_closed(form, t))));
    CHECK(std::abs(G.det() - 1.0) / std::max(1.0, G.g_qq * G.g_pp) <= 1e-10);
  }
}

TEST_CASE("complexity rate") {
  CHECK(complexity_rate(1.0, 1.0, 0.0, 0.0) == 0.0);
  CHECK_FAILURE(complexity_rate(0.5, 0.5, 0.0, 0.0), Failure::RateSingular);

  const auto lim = complexity_rate_regularized(0.5, 0.5, 0.0, 0.0);
  CHECK(lim.branch == RateBranch::Limit);
  CHECK(lim.value == 0.0);
  const auto local = complexity_rate_regularized(0.5, 0.5 + 1e-11, 0.0, 1e-8);
  CHECK(local.branch == RateBranch::LocalModel);
  CHECK(complexity_rate_regularized(1.0, 1.0, 0.1, 0.1).branch == RateBranch::Exact);

  // central finite difference of C(t) at CK gamma = 0.5, t = 1
  const CKClosedForm form(0.5, 1.0);
  const auto p = form.profile();
  auto C = [&](double t) { return four_forms(form, t).covariance; };
  const double h = 1e-3, t = 1.0;
  const double fd = (C(t - 2 * h) - 8 * C(t - h) + 8 * C(t + h) - C(t + 2 * h)) / (12 * h);
  const auto s = p.evaluate(t);
  const auto e = excitation_closed(form, t);
  const auto mom = second_moments(s, e);
  const auto rate = moment_rates(s, e);
  CHECK(testing::close(complexity_rate(mom.q2, mom.p2, rate.q2_dot, rate.p2_dot), fd, 1e-6));

  // small t: C ~ gamma t^2, so dC/dt ~ 2 gamma t
  const double ts = 1e-2;
  const auto ss = p.evaluate(ts);
  const auto es = excitation_closed(form, ts);
  const auto ms = second_moments(ss, es);
  const auto rs = moment_rates(ss, es);
  const auto small = complexity_rate_regularized(ms.q2, ms.p2, rs.q2_dot, rs.p2_dot);
  CHECK(testing::rel_close(small.value, 2 * 0.5 * ts, 1e-2));
}

TEST_CASE("moment rates against finite differences") {
  CHECK(moment_rates(ParameterSample{}, Excitation(0.0)).q2_dot == 0.0);
  CHECK(moment_rates(ParameterSample{}, Excitation(0.0)).p2_dot == 0.0);
  for (auto [g, t] : {std::pair{0.5, 1.0}, std::pair{2.0, 0.3}}) {
    CAPTURE(g);
    const CKClosedForm form(g, 1.0);
    const auto p = form.profile();
    auto mom = [&](double u) { return second_moments(p.evaluate(u), excitation_closed(form, u)); };
    const double h = 1e-3;
    const double fq = (mom(t - 2 * h).q2 - 8 * mom(t - h).q2 + 8 * mom(t + h).q2 - mom(t + 2 * h).q2) / (12 * h);
    const double fp = (mom(t - 2 * h).p2 - 8 * mom(t - h).p2 + 8 * mom(t + h).p2 - mom(t + 2 * h).p2) / (12 * h);
    const auto r = moment_rates(p.evaluate(t), excitation_closed(form, t));
    CHECK(testing::close(r.q2_dot, fq, 1e-7));
    CHECK(testing::close(r.p2_dot, fp, 1e-7));
  }
}
