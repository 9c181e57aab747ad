#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tdosc/config.hpp"
#include "tdosc/table_io.hpp"

namespace tdosc {

struct CommandFlags {
  bool observables = false;  // evolve: add observable columns
  bool ratio = false;        // complexity: add the two ratio columns
  bool su2 = false;          // lanczos: emit the su(2) demo chain instead
  bool coefficients = false; // complexity: add coeff_A, coeff_D, coeff_F, coeff_G
};

/// Each builder returns the table the command would write; the cmd_* wrappers
/// also write it (to output.path, or stdout when the path is empty).
Table build_evolve_table(const RunConfig& config, const CommandFlags& flags);
Table build_complexity_table(const RunConfig& config, const CommandFlags& flags);
Table build_lanczos_table(const RunConfig& config, const CommandFlags& flags);

struct FigureSpec {
  std::vector<double> gammas{0.5, 1.0, 2.0};
  double omega = 1.0;
  double t_end = 10.0;
  std::size_t samples = 1001;
  int precision = 12;
  std::string config_hash;
};

struct FigureFile {
  int figure = 1;
  std::string regime;
  double gamma = 0.0;
  std::filesystem::path path;
};

/// fig{1,2,3}_<regime>.csv for every damping rate, from the closed forms:
/// fig1 <n>(t) and |z|(t), fig2 C and C_S, fig3 their rates.
std::vector<FigureFile> write_figures(const FigureSpec& spec, const std::filesystem::path& dir);

FigureSpec figure_spec(const RunConfig& config);

/// Writes the table and returns the destination ("-" for stdout).
std::string emit(const RunConfig& config, const std::string& command, const Table& table);

}  // namespace tdosc
