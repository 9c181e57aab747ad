#include "tdosc/commands.hpp"

#include <cstdio>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "tdosc/analytic_ck.hpp"
#include "tdosc/errors.hpp"
#include "tdosc/evolution.hpp"
#include "tdosc/kernels.hpp"
#include "tdosc/nielsen.hpp"
#include "tdosc/krylov.hpp"
#include "tdosc/observables.hpp"

namespace tdosc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> output_grid(const RunConfig& c) {
  const double t1 = c.require_t_end();
  std::vector<double> t(c.samples);
  for (std::size_t i = 0; i < c.samples; ++i)
    t[i] = c.t_start + (t1 - c.t_start) * static_cast<double>(i) / static_cast<double>(c.samples - 1);
  t.back() = t1;
  return t;
}

Trajectory trajectory(const RunConfig& c, const ParameterProfile& profile) {
  const auto grid = output_grid(c);
  const ode::Tolerances tol{c.rel_tol, c.abs_tol};
  return c.method == "mode_function" ? integrate_mu(profile, grid, tol) : integrate_z(profile, grid, tol);
}

std::string header(const RunConfig& c, const std::string& command) {
  return fmt::format("tdosc {} profile={} config_hash={}", command, c.profile_kind, c.hash_hex());
}

}  // namespace

Table build_evolve_table(const RunConfig& c, const CommandFlags& flags) {
  const auto profile = c.profile();
  const auto traj = trajectory(c, profile);
  Table t;
  t.comments.push_back(header(c, "evolve"));
  t.columns = {"t", "re_z", "im_z", "abs_z"};
  if (flags.observables)
    for (const char* name : {"n_mean", "n_dot", "theta", "E", "q2", "p2", "M"}) t.columns.emplace_back(name);
  for (const auto& st : traj.samples) {
    std::vector<double> row{st.t, st.z.real(), st.z.imag(), std::abs(st.z)};
    if (flags.observables) {
      const auto o = observe(profile.evaluate(st.t), st.excitation());
      row.insert(row.end(), {o.n_mean, o.n_dot, o.theta, o.E, o.q2, o.p2, o.M});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table build_complexity_table(const RunConfig& c, const CommandFlags& flags) {
  const auto profile = c.profile();
  const auto traj = trajectory(c, profile);
  const auto pts = series_points(profile, traj);
  const auto rows = parallel::evaluate_series(pts, profile.m0(), profile.omega0(), c.bargmann_h);
  Table t;
  t.comments.push_back(header(c, "complexity"));
  t.columns = {"t", "C_nielsen", "dC_dt", "C_spread", "dCs_dt", "gamma_plus_re", "gamma_plus_im"};
  if (flags.ratio) {
    t.columns.emplace_back("ratio_moment");
    t.columns.emplace_back("ratio_sinh");
  }
  if (flags.coefficients) t.columns.insert(t.columns.end(), {"coeff_A", "coeff_D", "coeff_F", "coeff_G"});
  for (const auto& r : rows) {
    std::vector<double> row{r.t, r.C_nielsen, r.dC_dt, r.C_spread, r.dCs_dt, r.gamma_re, r.gamma_im};
    if (flags.ratio) row.insert(row.end(), {r.ratio_moment, r.ratio_sinh});
    if (flags.coefficients) {
      // undefined where m_dot/m + omega_dot/omega vanishes
      NielsenCoefficients k{kNaN, kNaN, kNaN, kNaN};
      try {
        k = nielsen_coefficients(profile.evaluate(r.t));
      } catch (const NumericalError&) {
      }
      row.insert(row.end(), {k.A, k.D, k.F, k.G});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table build_lanczos_table(const RunConfig& c, const CommandFlags& flags) {
  Table t;
  if (flags.su2) {
    t.comments.push_back(header(c, "lanczos su2") + fmt::format(" alpha={} gamma={} delta={} j={}", c.su2_alpha,
                                                                 c.su2_gamma, c.su2_delta, c.su2_j));
    t.columns = {"n", "a_n", "b_n"};
    const auto chain = su2_chain(c.su2_alpha, c.su2_gamma, c.su2_delta, c.su2_j);
    for (std::size_t n = 0; n < chain.a.size(); ++n)
      t.rows.push_back({static_cast<double>(n), chain.a[n], chain.b[n]});
    return t;
  }
  const auto profile = c.profile();
  t.comments.push_back(header(c, "lanczos") + fmt::format(" h={}", c.bargmann_h));
  t.columns = {"t", "n", "a_n", "b_n", "lambda", "lambda0"};
  for (double time : c.lanczos_times) {
    const auto coeffs = su11_coefficients(profile.evaluate(time), profile.m0(), profile.omega0());
    const auto chain = lanczos_coefficients(coeffs, c.bargmann_h, c.lanczos_n_max);
    for (std::size_t n = 0; n <= chain.n_max; ++n)
      t.rows.push_back({time, static_cast<double>(n), chain.a[n], chain.b[n], coeffs.lam, coeffs.lam0});
  }
  return t;
}

FigureSpec figure_spec(const RunConfig& c) {
  FigureSpec f;
  f.gammas = c.verify_gammas;
  f.omega = c.omega0;
  f.t_end = c.t_end_or(10.0);
  f.samples = c.samples;
  f.precision = c.precision;
  f.config_hash = c.hash_hex();
  return f;
}

std::vector<FigureFile> write_figures(const FigureSpec& spec, const std::filesystem::path& dir) {
  std::set<std::string> seen;
  std::vector<FigureFile> files;
  const auto grid = uniform_grid(spec.t_end, spec.samples);
  for (double g : spec.gammas) {
    const CKClosedForm form(g, spec.omega);
    const std::string regime = to_string(form.regime.regime);
    if (!seen.insert(regime).second)
      throw ConfigError("verify.gammas", 0, fmt::format("verify.gammas: two damping rates in the {} regime", regime));
    const auto profile = form.profile();
    std::vector<SeriesPoint> pts;
    pts.reserve(grid.size());
    for (double t : grid) pts.push_back({profile.evaluate(t), excitation_closed(form, t)});
    const auto rows = parallel::evaluate_series(pts, profile.m0(), profile.omega0());

    const std::string note = fmt::format("regime={} gamma={} omega={} config_hash={}", regime, g, spec.omega,
                                         spec.config_hash.empty() ? "none" : spec.config_hash);
    Table fig[3];
    fig[0].columns = {"t", "n_mean", "abs_z", "deficit", "re_z", "im_z"};
    fig[1].columns = {"t", "C_nielsen", "C_spread"};
    fig[2].columns = {"t", "dC_dt", "dCs_dt"};
    for (int k = 0; k < 3; ++k) fig[k].comments.push_back(fmt::format("tdosc figures fig{} {}", k + 1, note));
    for (const auto& r : rows) {
      fig[0].rows.push_back({r.t, r.n_mean, r.abs_z, r.deficit, r.re_z, r.im_z});
      fig[1].rows.push_back({r.t, r.C_nielsen, r.C_spread});
      fig[2].rows.push_back({r.t, r.dC_dt, r.dCs_dt});
    }
    for (int k = 0; k < 3; ++k) {
      const auto path = dir / fmt::format("fig{}_{}.csv", k + 1, regime);
      write_table(path, fig[k], "csv", spec.precision,
                  {{"command", "figures"}, {"figure", k + 1}, {"regime", regime}, {"gamma", g},
                   {"omega", spec.omega}, {"config_hash", spec.config_hash}});
      files.push_back({k + 1, regime, g, path});
    }
  }
  return files;
}

std::string emit(const RunConfig& c, const std::string& command, const Table& table) {
  if (c.path.empty()) {
    const std::string text = c.format == "json" ? to_json(table, c.precision) : to_csv(table, c.precision);
    std::fwrite(text.data(), 1, text.size(), stdout);
    return "-";
  }
  write_table(c.path, table, c.format, c.precision,
              {{"command", command}, {"config_hash", c.hash_hex()}, {"config", c.given}});
  return c.path;
}

}  // namespace tdosc
