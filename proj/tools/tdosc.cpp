// Command-line front end: evolve, complexity, lanczos, verify, figures.
// Exit codes: 0 success, 1 check failure, 2 configuration error,
// 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "tdosc/commands.hpp"
#include "tdosc/config.hpp"
#include "tdosc/errors.hpp"
#include "tdosc/kernels.hpp"
#include "tdosc/table_io.hpp"
#include "tdosc/verify.hpp"

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "key=value configuration file");
  cmd->add_option("-s,--set", c.overrides, "override a key, e.g. --set time.t_end=5")->take_all();
  cmd->add_option("-o,--output", c.output, "output path (same as output.path)");
}

tdosc::RunConfig load(const Common& c) {
  tdosc::RunConfig cfg = c.config_path.empty() ? tdosc::RunConfig{} : tdosc::parse_config_file(c.config_path);
  auto overrides = c.overrides;
  if (!c.output.empty()) overrides.push_back("output.path=" + c.output);
  tdosc::apply_overrides(cfg, overrides);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complexity of a quantum oscillator with time-dependent mass and frequency"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "list every subcommand option");

  Common common;
  tdosc::CommandFlags flags;
  std::vector<double> times;
  bool serial = false;

  auto* evolve = app.add_subcommand("evolve", "integrate z(t) and write the trajectory");
  add_common(evolve, common);
  evolve->add_flag("--observables", flags.observables, "add n_mean, n_dot, theta, E, q2, p2, M columns");

  auto* complexity = app.add_subcommand("complexity", "Nielsen and spread complexity with their rates");
  add_common(complexity, common);
  complexity->add_flag("--ratio", flags.ratio, "add C_S/(q2+p2-1) and C_S/sinh^2(C) columns");
  complexity->add_flag("--coefficients", flags.coefficients, "add the coefficient functions coeff_A, coeff_D, coeff_F, coeff_G");

  auto* lanczos = app.add_subcommand("lanczos", "Lanczos coefficients a_n, b_n at the given times");
  add_common(lanczos, common);
  lanczos->add_option("--times", times, "times (same as lanczos.times)");
  lanczos->add_flag("--su2", flags.su2, "emit the su(2) chain from the su2.* keys instead");

  auto* verify = app.add_subcommand("verify", "run every acceptance check and write a JSON report");
  add_common(verify, common);
  verify->add_flag("--serial", serial, "use the serial reference kernels");

  auto* figures = app.add_subcommand("figures", "write the figure data series (one CSV per figure and regime)");
  add_common(figures, common);

  auto* keys = app.add_subcommand("keys", "list configuration keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  tdosc::configure_threads_from_env();

  try {
    if (keys->parsed()) {
      for (const auto& [k, v] : tdosc::config_keys()) fmt::print("{:<22} {}\n", k, v);
      return kOk;
    }
    tdosc::RunConfig cfg = load(common);
    if (!times.empty()) {
      std::string list;
      for (double t : times) list += (list.empty() ? "" : ",") + fmt::format("{}", t);
      tdosc::apply_overrides(cfg, {"lanczos.times=" + list});
    }

    if (evolve->parsed()) {
      tdosc::emit(cfg, "evolve", tdosc::build_evolve_table(cfg, flags));
    } else if (complexity->parsed()) {
      tdosc::emit(cfg, "complexity", tdosc::build_complexity_table(cfg, flags));
    } else if (lanczos->parsed()) {
      tdosc::emit(cfg, "lanczos", tdosc::build_lanczos_table(cfg, flags));
    } else if (figures->parsed()) {
      const auto dir = cfg.path.empty() ? std::string("figures") : cfg.path;
      for (const auto& f : tdosc::write_figures(tdosc::figure_spec(cfg), dir)) fmt::print("{}\n", f.path.string());
    } else if (verify->parsed()) {
      auto opts = tdosc::verify_options(cfg);
      opts.parallel = !serial;
      tdosc::VerifyReport report;
      for (int id = 1; id <= tdosc::kCriterionCount; ++id) {
        report.criteria.push_back(tdosc::run_criterion(id, opts));
        fmt::print("{}\n", report.criteria.back().summary());
        std::fflush(stdout);
      }
      auto j = report.to_json();
      j["config_hash"] = cfg.hash_hex();
      const std::string path = cfg.path.empty() ? std::string("verify_report.json") : cfg.path;
      tdosc::write_atomic(path, j.dump(2) + "\n");
      fmt::print("report: {}\n", path);
      if (report.numerical_failure()) return kNumericalFailure;
      return report.passed() ? kOk : kCheckFailed;
    }
  } catch (const tdosc::ConfigError& e) {
    if (e.line() > 0)
      fmt::print(stderr, "config error (line {}): {}\n", e.line(), e.what());
    else
      fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const tdosc::NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumericalFailure;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kConfigError;
  }
  return kOk;
}
