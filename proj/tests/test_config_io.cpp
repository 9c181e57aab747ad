#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <doctest.h>

#include "tdosc/commands.hpp"
#include "tdosc/config.hpp"
#include "tdosc/errors.hpp"
#include "tdosc/table_io.hpp"

using namespace tdosc;

namespace {

int config_error_line(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string config_error_key(const std::string& text) {
  try {
    const auto c = parse_config_text(text);
    c.require_t_end();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return {};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config_text(
      "# comment\n"
      "profile.kind = caldirola_kanai\n"
      "profile.gamma=2   # trailing comment\n"
      "\n"
      "time.t_end = 5\n"
      "verify.gammas = 0.5, 2\n"
      "oracle.scheme = midpoint\n");
  CHECK(c.gamma == 2.0);
  CHECK(c.require_t_end() == 5.0);
  CHECK(c.verify_gammas == std::vector<double>{0.5, 2.0});
  CHECK(c.oracle_scheme == oracle::Scheme::Midpoint);
  CHECK(c.has("profile.gamma"));
  CHECK_FALSE(c.has("profile.m0"));
  CHECK(c.profile().gamma() == 2.0);
}

TEST_CASE("config diagnostics") {
  CHECK(config_error_line("time.t_end = 1\nprofile.bogus = 3\n") == 2);
  CHECK(config_error_line("time.t_end = abc\n") == 1);
  CHECK(config_error_line("just words\n") == 1);
  CHECK(config_error_key("profile.gamma = 1\n") == "time.t_end");
  CHECK(config_error_line("output.precision = 30\n") == 1);
  CHECK(config_error_line("time.samples = 1\n") == 1);
}

TEST_CASE("overrides and hashing") {
  auto a = parse_config_text("time.t_end = 5\n");
  auto b = a;
  CHECK(a.hash() == b.hash());
  apply_overrides(b, {"profile.gamma=1"});
  CHECK(b.gamma == 1.0);
  CHECK(a.hash() != b.hash());
  CHECK(a.hash_hex().size() == 16);
  auto c = a;
  apply_overrides(c, {"output.path=/tmp/elsewhere.csv"});
  CHECK(a.hash() == c.hash());
  CHECK_THROWS_AS(apply_overrides(b, {"nokey=1"}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(b, {"missing_equals"}), ConfigError);
}

TEST_CASE("every documented key parses") {
  CHECK(config_keys().size() >= 25);
  CHECK(config_keys().count("time.t_end") == 1);
  CHECK(config_keys().count("output.precision") == 1);
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.0, 6) == "1.00000e+00");
  CHECK(format_number(-0.0, 6) == "0.00000e+00");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN(), 6) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity(), 6) == "-inf");
}

TEST_CASE("csv and json round trips are idempotent") {
  Table t;
  t.comments = {"tdosc test config_hash=0"};
  t.columns = {"t", "x", "y"};
  t.rows = {{0.0, 1.0 / 3.0, -2e-300}, {0.5, std::nan(""), 123456789.123}};
  for (int p : {6, 12, 17}) {
    const std::string csv = to_csv(t, p);
    CHECK(to_csv(parse_csv(csv), p) == csv);
    const std::string js = to_json(t, p);
    CHECK(to_json(parse_json(js), p) == js);
  }
  const auto back = parse_csv(to_csv(t, 17));
  CHECK(back.rows[0][1] == 1.0 / 3.0);
  CHECK(back.comments == t.comments);
  CHECK(back.series("y")[1] == 123456789.123);
  CHECK_THROWS_AS(back.column("zz"), std::out_of_range);
}

TEST_CASE("atomic writes leave a table and its sidecar") {
  const auto dir = std::filesystem::temp_directory_path() / "tdosc_io_test";
  std::filesystem::create_directories(dir);
  Table t;
  t.columns = {"a"};
  t.rows = {{1.0}, {2.0}};
  write_table(dir / "out.csv", t, "csv", 8, {{"command", "test"}});
  CHECK(std::filesystem::exists(dir / "out.csv"));
  CHECK(std::filesystem::exists(dir / "out.csv.meta.json"));
  CHECK(read_table(dir / "out.csv").rows == t.rows);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 2);  // no temporaries left behind
  std::filesystem::remove_all(dir);
}

TEST_CASE("command tables") {
  auto c = parse_config_text("profile.kind = constant\ntime.t_end = 3\ntime.samples = 7\n");
  const auto ev = build_evolve_table(c, {});
  CHECK(ev.columns == std::vector<std::string>{"t", "re_z", "im_z", "abs_z"});
  for (const auto& r : ev.rows) CHECK((r[1] == 0.0 && r[2] == 0.0 && r[3] == 0.0));

  auto ck = parse_config_text("time.t_end = 2\ntime.samples = 5\n");
  const auto cx = build_complexity_table(ck, {false, true, false});
  CHECK(cx.columns.size() == 9);
  CHECK(cx.rows[0][cx.column("C_nielsen")] == 0.0);
  CHECK(cx.rows[0][cx.column("C_spread")] == 0.0);

  CommandFlags with_coeffs;
  with_coeffs.coefficients = true;
  const auto cf = build_complexity_table(ck, with_coeffs);
  CHECK(cf.columns.size() == 11);
  // m omega = 1 at t = 0: A = 1, D = 0, F = 2
  CHECK(cf.rows[0][cf.column("coeff_A")] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cf.rows[0][cf.column("coeff_D")] == doctest::Approx(0.0));
  CHECK(cf.rows[0][cf.column("coeff_F")] == doctest::Approx(2.0).epsilon(1e-15));
  auto flat = parse_config_text("profile.kind = constant\ntime.t_end = 1\ntime.samples = 3\n");
  CHECK(std::isnan(build_complexity_table(flat, with_coeffs).rows[1][7]));

  const auto lz = build_lanczos_table(ck, {});
  for (const auto& r : lz.rows)
    if (r[0] == 0.0) CHECK(r[lz.column("b_n")] == 0.0);
  const auto su2 = build_lanczos_table(ck, {false, false, true});
  CHECK(su2.columns == std::vector<std::string>{"n", "a_n", "b_n"});
  CHECK(su2.rows.size() == 5);  // j = 2
}
