#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace tdosc {

struct Table {
  std::vector<std::string> comments;  // written as "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
  std::vector<double> series(const std::string& name) const;
};

/// Scientific notation with `precision` significant digits; nan/inf spelled out.
std::string format_number(double x, int precision);

std::string to_csv(const Table& table, int precision);
std::string to_json(const Table& table, int precision);

Table parse_csv(const std::string& text);
Table parse_json(const std::string& text);
Table read_table(const std::filesystem::path& path);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Table plus a sidecar <path>.meta.json holding run metadata.
void write_table(const std::filesystem::path& path, const Table& table, const std::string& format, int precision,
                 const nlohmann::json& meta);

}  // namespace tdosc
