#include "tdosc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "tdosc/errors.hpp"

namespace tdosc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, int line) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key, line, fmt::format("{}: expected a number, got '{}'", key, v));
  return x;
}

std::size_t to_count(const std::string& key, const std::string& v, int line) {
  std::size_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key, line, fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item), line));
  if (out.empty()) throw ConfigError(key, line, fmt::format("{}: empty list", key));
  return out;
}

void require(bool ok, const std::string& key, int line, const std::string& what) {
  if (!ok) throw ConfigError(key, line, fmt::format("{}: {}", key, what));
}

void set_entry(RunConfig& c, const std::string& key, const std::string& v, int line) {
  if (!config_keys().count(key)) throw ConfigError(key, line, fmt::format("unknown key '{}'", key));
  if (key == "profile.kind") {
    require(v == "constant" || v == "caldirola_kanai" || v == "tabulated", key, line,
            "expected constant, caldirola_kanai or tabulated");
    c.profile_kind = v;
  } else if (key == "profile.m0") {
    c.m0 = to_double(key, v, line);
    require(c.m0 > 0.0, key, line, "must be positive");
  } else if (key == "profile.omega0") {
    c.omega0 = to_double(key, v, line);
    require(c.omega0 > 0.0, key, line, "must be positive");
  } else if (key == "profile.gamma") {
    c.gamma = to_double(key, v, line);
    require(c.gamma >= 0.0, key, line, "must be non-negative");
  } else if (key == "profile.table_path") {
    c.table_path = v;
  } else if (key == "time.t_start") {
    c.t_start = to_double(key, v, line);
    require(c.t_start >= 0.0, key, line, "must be non-negative");
  } else if (key == "time.t_end") {
    c.t_end = to_double(key, v, line);
    require(*c.t_end > 0.0, key, line, "must be positive");
  } else if (key == "time.samples") {
    c.samples = to_count(key, v, line);
    require(c.samples >= 2, key, line, "must be at least 2");
  } else if (key == "solver.rel_tol") {
    c.rel_tol = to_double(key, v, line);
    require(c.rel_tol > 0.0, key, line, "must be positive");
  } else if (key == "solver.abs_tol") {
    c.abs_tol = to_double(key, v, line);
    require(c.abs_tol > 0.0, key, line, "must be positive");
  } else if (key == "solver.method") {
    require(v == "riccati" || v == "mode_function", key, line, "expected riccati or mode_function");
    c.method = v;
  } else if (key == "oracle.dim") {
    c.oracle_dim = to_count(key, v, line);
    require(c.oracle_dim >= 2, key, line, "must be at least 2");
  } else if (key == "oracle.max_dim") {
    c.oracle_max_dim = to_count(key, v, line);
  } else if (key == "oracle.dt") {
    c.oracle_dt = to_double(key, v, line);
    require(c.oracle_dt > 0.0, key, line, "must be positive");
  } else if (key == "oracle.scheme") {
    require(v == "magnus4" || v == "midpoint", key, line, "expected magnus4 or midpoint");
    c.oracle_scheme = v == "magnus4" ? oracle::Scheme::Magnus4 : oracle::Scheme::Midpoint;
  } else if (key == "oracle.t_end") {
    c.oracle_t_end = to_double(key, v, line);
    require(*c.oracle_t_end > 0.0, key, line, "must be positive");
  } else if (key == "oracle.checkpoints") {
    c.oracle_checkpoints = to_count(key, v, line);
    require(c.oracle_checkpoints >= 1, key, line, "must be at least 1");
  } else if (key == "output.format") {
    require(v == "csv" || v == "json", key, line, "expected csv or json");
    c.format = v;
  } else if (key == "output.path") {
    c.path = v;
  } else if (key == "output.precision") {
    const auto p = to_count(key, v, line);
    require(p >= 6 && p <= 17, key, line, "must lie in [6, 17]");
    c.precision = static_cast<int>(p);
  } else if (key == "krylov.h") {
    c.bargmann_h = to_double(key, v, line);
    require(c.bargmann_h > 0.0, key, line, "must be positive");
  } else if (key == "lanczos.n_max") {
    c.lanczos_n_max = to_count(key, v, line);
    require(c.lanczos_n_max >= 1, key, line, "must be at least 1");
  } else if (key == "lanczos.times") {
    c.lanczos_times = to_list(key, v, line);
    for (double t : c.lanczos_times) require(t >= 0.0, key, line, "times must be non-negative");
  } else if (key == "su2.alpha") {
    c.su2_alpha = to_double(key, v, line);
  } else if (key == "su2.gamma") {
    c.su2_gamma = to_double(key, v, line);
  } else if (key == "su2.delta") {
    c.su2_delta = to_double(key, v, line);
  } else if (key == "su2.j") {
    c.su2_j = to_double(key, v, line);
    const double twice = 2.0 * c.su2_j;
    require(c.su2_j >= 0.0 && twice == std::floor(twice), key, line, "must be a non-negative half-integer");
  } else if (key == "verify.gammas") {
    c.verify_gammas = to_list(key, v, line);
    for (double g : c.verify_gammas) require(g > 0.0, key, line, "damping rates must be positive");
  }
  c.given[key] = v;
}

void validate(const RunConfig& c) {
  if (c.t_end && *c.t_end <= c.t_start)
    throw ConfigError("time.t_end", 0, "time.t_end: must exceed time.t_start");
  if (c.profile_kind == "tabulated" && c.table_path.empty())
    throw ConfigError("profile.table_path", 0, "profile.table_path: required for a tabulated profile");
}

std::pair<std::string, std::string> split_assignment(const std::string& raw, int line) {
  const auto eq = raw.find('=');
  if (eq == std::string::npos)
    throw ConfigError("", line, fmt::format("expected key = value, got '{}'", raw));
  std::string key = trim(raw.substr(0, eq));
  std::string value = trim(raw.substr(eq + 1));
  if (key.empty()) throw ConfigError("", line, "missing key before '='");
  if (value.empty()) throw ConfigError(key, line, fmt::format("{}: missing value", key));
  return {key, value};
}

}  // namespace

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys{
      {"profile.kind", "constant | caldirola_kanai | tabulated"},
      {"profile.m0", "initial mass"},
      {"profile.omega0", "initial frequency (the constant frequency for caldirola_kanai)"},
      {"profile.gamma", "damping rate for caldirola_kanai"},
      {"profile.table_path", "CSV with columns t, m, omega for tabulated"},
      {"time.t_start", "first output time (integration always starts at 0)"},
      {"time.t_end", "last output time"},
      {"time.samples", "number of output times"},
      {"solver.rel_tol", "relative tolerance of the adaptive integrator"},
      {"solver.abs_tol", "absolute tolerance of the adaptive integrator"},
      {"solver.method", "riccati | mode_function"},
      {"oracle.dim", "even-sector truncation of the Fock oracle"},
      {"oracle.max_dim", "escalation cap for the oracle dimension"},
      {"oracle.dt", "oracle time step"},
      {"oracle.scheme", "magnus4 | midpoint"},
      {"oracle.t_end", "end of the oracle comparison window"},
      {"oracle.checkpoints", "oracle checkpoints per regime"},
      {"output.format", "csv | json"},
      {"output.path", "output file (directory for figures)"},
      {"output.precision", "significant digits, 6..17"},
      {"krylov.h", "Bargmann index (0.25 even sector, 0.75 odd)"},
      {"lanczos.n_max", "last Lanczos index"},
      {"lanczos.times", "comma-separated times for the Lanczos tables"},
      {"su2.alpha", "su(2) coupling alpha"},
      {"su2.gamma", "su(2) J_0 coefficient"},
      {"su2.delta", "su(2) constant shift"},
      {"su2.j", "su(2) spin"},
      {"verify.gammas", "comma-separated damping rates checked by verify"},
  };
  return keys;
}

ParameterProfile RunConfig::profile() const {
  if (profile_kind == "constant") return ParameterProfile::constant(m0, omega0);
  if (profile_kind == "tabulated") return ParameterProfile::from_csv(table_path);
  return ParameterProfile::caldirola_kanai(m0, omega0, gamma);
}

double RunConfig::require_t_end() const {
  if (!t_end) throw ConfigError("time.t_end", 0, "missing required key time.t_end");
  return *t_end;
}

std::uint64_t RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  // the destination does not change what is written, so it stays out of the hash
  for (const auto& [k, v] : given)
    if (k != "output.path") feed(k + "=" + v + "\n");
  return h;
}

std::string RunConfig::hash_hex() const { return fmt::format("{:016x}", hash()); }

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto [key, value] = split_assignment(raw, line);
    set_entry(c, key, value, line);
  }
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, fmt::format("cannot read config file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_overrides(RunConfig& c, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto [key, value] = split_assignment(trim(o), 0);
    set_entry(c, key, value, 0);
  }
  validate(c);
}

}  // namespace tdosc
