#include <cmath>
#include <vector>

#include <doctest.h>

#include "reference_values.hpp"
#include "support.hpp"
#include "tdosc/analytic_ck.hpp"
#include "tdosc/krylov.hpp"
#include "tdosc/observables.hpp"
#include "tdosc/oracle.hpp"

using namespace tdosc;
namespace orc = tdosc::oracle;

namespace {

double mean_from_occupations(const OccupationDistribution& d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d.probabilities.size(); ++k) s += 2.0 * static_cast<double>(k) * d.probabilities[k];
  return s;
}

orc::FockState final_state(double gamma, double t, orc::PropagationOptions opt = {}, std::size_t max_dim = 512) {
  const std::vector<double> cp{t};
  return orc::propagate_escalating(CKClosedForm(gamma, 1.0).profile(), cp, opt, max_dim).states.back();
}

}  // namespace

TEST_CASE("operator matrices") {
  const auto ops = orc::build_operators(64, 1.0, 1.0);
  CHECK(ops.commutator_defect() <= 1e-10);
  CHECK(ops.Q.rows() == 128);
}

TEST_CASE("hamiltonian matrix") {
  const auto ops = orc::build_operators(16, 1.0, 1.0);
  const auto h0 = orc::hamiltonian_matrix(ParameterSample{}, ops);
  for (int n = 0; n < 16; ++n) CHECK(testing::close(h0.diag[n], 0.5 + 2.0 * n, 1e-14));
  for (int n = 0; n < 15; ++n) CHECK(testing::close(h0.off[n], 0.0, 1e-14));

  const auto s = CKClosedForm(0.5, 1.0).profile().evaluate(1.0);
  const auto h1 = orc::hamiltonian_matrix(s, ops);
  CHECK(h1.off[0] == doctest::Approx(std::sinh(1.0) / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("hamiltonian matrix equals the lanczos chain") {
  const auto ops = orc::build_operators(64, 1.0, 1.0);
  for (double g : {0.5, 1.0, 2.0}) {
    for (double t : {0.0, 0.7, 2.0}) {
      const auto s = CKClosedForm(g, 1.0).profile().evaluate(t);
      const auto h = orc::hamiltonian_matrix(s, ops);
      const auto chain = lanczos_coefficients(su11_coefficients(s, 1.0, 1.0), kEvenSector, 63);
      for (int n = 0; n < 64; ++n) {
        CHECK(testing::rel_close(h.diag[n], chain.a[static_cast<std::size_t>(n)], 1e-12));
        if (n < 63) CHECK(testing::rel_close(h.off[n], chain.b[static_cast<std::size_t>(n) + 1], 1e-12));
      }
    }
  }
}

TEST_CASE("stationary ground state") {
  const std::vector<double> cp{0.5, 3.0};
  const auto run = orc::propagate(ParameterProfile::constant(1.0, 1.0), cp, {32});
  for (const auto& st : run.states) {
    CHECK(std::abs(st.c[0] - std::exp(cplx(0.0, -0.5 * st.t))) < 1e-12);
    CHECK(testing::close(std::norm(st.c[0]), 1.0, 1e-12));
  }
}

TEST_CASE("moments") {
  const auto ops = orc::build_operators(32, 1.0, 1.0);
  orc::FockState ground;
  ground.c = Eigen::VectorXcd::Zero(32);
  ground.c[0] = 1.0;
  const auto g = orc::measure_moments(ground, ops, ParameterSample{});
  CHECK(g.q2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.p2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.H == doctest::Approx(0.5).epsilon(1e-14));

  const auto st = final_state(0.5, 1.0);
  const auto big = orc::build_operators(st.dim(), 1.0, 1.0);
  const auto s = CKClosedForm(0.5, 1.0).profile().evaluate(1.0);
  const auto m = orc::measure_moments(st, big, s);
  CHECK(testing::close(m.q2, ref::UD_T1.q2, 1e-6));
  CHECK(testing::close(m.p2, ref::UD_T1.p2, 1e-6));
  CHECK(std::abs(m.H_imag) <= 1e-10);

  // overdamped at t = 0.5, the edge of what 512 levels hold at gamma = 2
  const CKClosedForm od(2.0, 1.0);
  const auto st2 = final_state(2.0, 0.5);
  const auto s2 = od.profile().evaluate(0.5);
  const auto m2 = orc::measure_moments(st2, orc::build_operators(st2.dim(), 1.0, 1.0), s2);
  CHECK(testing::close(m2.q2, ref::OD_T05.q2, 1e-6));
  CHECK(testing::close(m2.p2, ref::OD_T05.p2, 1e-6));
  // <H> against omega (<n> + 1/2)
  CHECK(testing::close(m2.H, mean_energy(s2, excitation_closed(od, 0.5)), 1e-6));
}

TEST_CASE("occupations of the instantaneous levels") {
  orc::FockState ground;
  ground.c = Eigen::VectorXcd::Zero(16);
  ground.c[0] = 1.0;
  const auto p0 = orc::measure_occupations(ground, ParameterSample{}, orc::build_operators(32, 1.0, 1.0));
  CHECK(p0.probabilities[0] == doctest::Approx(1.0).epsilon(1e-12));

  for (auto [g, t] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    CAPTURE(g);
    CAPTURE(t);
    const CKClosedForm form(g, 1.0);
    const auto st = final_state(g, t);
    const auto s = form.profile().evaluate(t);
    const auto occ = orc::measure_occupations(st, s, orc::build_operators(2 * st.dim(), 1.0, 1.0));
    const auto exact = occupation_probabilities(excitation_closed(form, t));
    double worst = 0.0;
    for (std::size_t k = 0; k < occ.probabilities.size(); ++k) {
      const double e = k < exact.probabilities.size() ? exact.probabilities[k] : 0.0;
      worst = std::max(worst, std::abs(occ.probabilities[k] - e));
    }
    CHECK(worst <= 1e-6);
    // the particle number is read off the instantaneous levels, not the t = 0 Fock levels
    CHECK(testing::close(mean_from_occupations(occ), n_mean_closed(form, t), 1e-6));
  }
  CHECK_FAILURE(orc::measure_occupations(final_state(0.5, 0.2), ParameterSample{}, orc::build_operators(8, 1.0, 1.0)),
                Failure::Domain);
}

TEST_CASE("spread complexity read off the pair index") {
  orc::FockState ground;
  ground.c = Eigen::VectorXcd::Zero(8);
  ground.c[0] = 1.0;
  CHECK(orc::measure_spread(ground) == 0.0);
  CHECK(testing::close(orc::measure_spread(final_state(0.5, 1.0)), ref::UD_T1.CS, 1e-6));
  CHECK(testing::close(orc::measure_spread(final_state(1.0, 1.0)),
                       spread_complexity(gamma_plus_from_z(CKClosedForm(1.0, 1.0).profile().evaluate(1.0),
                                                           excitation_closed(CKClosedForm(1.0, 1.0), 1.0), 1.0, 1.0)),
                       1e-6));
}

TEST_CASE("step halving and dimension doubling") {
  const auto prof = CKClosedForm(0.5, 1.0).profile();
  const std::vector<double> cp{1.0};
  const auto a = orc::propagate(prof, cp, {128, 1e-3});
  const auto b = orc::propagate(prof, cp, {128, 5e-4});
  CHECK((a.states[0].c - b.states[0].c).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(a.max_norm_drift <= 1e-9);

  const auto c = orc::propagate(prof, cp, {256, 1e-3});
  CHECK((a.states[0].c - c.states[0].c.head(128)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(c.states[0].c.tail(128).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("midpoint scheme is unitary but less accurate") {
  const auto prof = CKClosedForm(0.5, 1.0).profile();
  const std::vector<double> cp{1.0};
  orc::PropagationOptions mid;
  mid.scheme = orc::Scheme::Midpoint;
  const auto m = orc::propagate(prof, cp, mid);
  CHECK(m.max_norm_drift <= 1e-9);
  CHECK(testing::close(orc::measure_spread(m.states[0]), ref::UD_T1.CS, 1e-5));
}

TEST_CASE("states beyond the truncation window are refused") {
  // <n> reaches 4 at gamma = 1, t = 2 and 5.4 at gamma = 2, t = 1; the tails need more than 512 levels
  for (auto [g, t] : {std::pair{2.0, 1.0}, std::pair{1.0, 2.0}}) {
    CAPTURE(g);
    CHECK_FAILURE(final_state(g, t), Failure::TruncationLeak);
  }
}

TEST_CASE("truncation leak") {
  const std::vector<double> cp{5.0};
  CHECK_FAILURE(orc::propagate(CKClosedForm(2.0, 1.0).profile(), cp, {8}), Failure::TruncationLeak);
  CHECK_FAILURE(orc::propagate_escalating(CKClosedForm(2.0, 1.0).profile(), cp, {8}, 16), Failure::TruncationLeak);
}
