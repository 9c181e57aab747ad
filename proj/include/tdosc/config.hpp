#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdosc/oracle.hpp"
#include "tdosc/profiles.hpp"

namespace tdosc {

/// Flat key=value configuration with dotted section keys, e.g.
///   profile.kind = caldirola_kanai
///   time.t_end = 10
/// '#' starts a comment. Unknown keys are rejected.
struct RunConfig {
  std::string profile_kind = "caldirola_kanai";
  double m0 = 1.0;
  double omega0 = 1.0;
  double gamma = 0.5;
  std::string table_path;

  double t_start = 0.0;
  std::optional<double> t_end;
  std::size_t samples = 1001;

  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::string method = "riccati";  // riccati | mode_function

  std::size_t oracle_dim = 128;
  std::size_t oracle_max_dim = 512;
  double oracle_dt = 1e-3;
  oracle::Scheme oracle_scheme = oracle::Scheme::Magnus4;
  std::optional<double> oracle_t_end;
  std::size_t oracle_checkpoints = 50;

  std::string format = "csv";
  std::string path;
  int precision = 12;

  double bargmann_h = 0.25;
  std::size_t lanczos_n_max = 16;
  std::vector<double> lanczos_times{0.0, 1.0};

  double su2_alpha = 1.0;
  double su2_gamma = 1.0;
  double su2_delta = 0.0;
  double su2_j = 2.0;

  std::vector<double> verify_gammas{0.5, 1.0, 2.0};

  /// Keys given explicitly (file or overrides), with their raw values.
  std::map<std::string, std::string> given;

  bool has(const std::string& key) const { return given.count(key) != 0; }
  ParameterProfile profile() const;
  /// time.t_end, or a ConfigError naming the key.
  double require_t_end() const;
  /// t_end when given, otherwise the fallback.
  double t_end_or(double fallback) const { return t_end.value_or(fallback); }
  /// FNV-1a 64 over the canonical "key=value" lines of the given keys, output.path excluded.
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

/// Every recognised key with a one-line description.
const std::map<std::string, std::string>& config_keys();

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Applies "key=value" overrides on top of an existing configuration.
void apply_overrides(RunConfig& config, const std::vector<std::string>& overrides);

}  // namespace tdosc
