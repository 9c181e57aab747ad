#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tdosc/config.hpp"
#include "tdosc/errors.hpp"

namespace tdosc {

struct Check {
  std::string name;
  double measured = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct CriterionReport {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> errors;  // numerical failures that stopped a check
  bool numerical_failure = false;

  bool passed() const;
  std::string summary() const;  // one line
};

struct VerifyOptions {
  std::vector<double> gammas{0.5, 1.0, 2.0};
  double omega = 1.0;
  double t_end = 10.0;
  std::size_t samples = 1001;
  ode::Tolerances tol;
  oracle::PropagationOptions oracle;
  std::size_t oracle_max_dim = 512;
  std::optional<double> oracle_t_end;  // default min(t_end, 1/gamma)
  std::size_t oracle_checkpoints = 50;
  int precision = 12;
  std::filesystem::path figures_dir;  // empty: a scratch directory
  bool parallel = true;
};

VerifyOptions verify_options(const RunConfig& config);

inline constexpr int kCriterionCount = 10;
const char* criterion_title(int id);

CriterionReport run_criterion(int id, const VerifyOptions& options);

struct VerifyReport {
  std::vector<CriterionReport> criteria;

  bool passed() const;
  bool numerical_failure() const;
  nlohmann::json to_json() const;
};

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace tdosc
