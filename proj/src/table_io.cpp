#include "tdosc/table_io.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <unistd.h>

namespace tdosc {

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range(fmt::format("no column '{}'", name));
}

std::vector<double> Table::series(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

std::string format_number(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  return fmt::format("{:.{}e}", x, precision - 1);
}

std::string to_csv(const Table& t, int precision) {
  std::string out;
  for (const auto& c : t.comments) out += "# " + c + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += format_number(r[i], precision);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t, int precision) {
  // numbers are emitted as formatted text so the precision setting applies
  std::string out = "{\n  \"comments\": " + nlohmann::json(t.comments).dump() + ",\n";
  out += "  \"columns\": " + nlohmann::json(t.columns).dump() + ",\n  \"rows\": [";
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    out += k ? ",\n    [" : "\n    [";
    for (std::size_t i = 0; i < t.rows[k].size(); ++i) {
      if (i) out += ", ";
      const double x = t.rows[k][i];
      out += std::isfinite(x) ? format_number(x, precision) : "null";
    }
    out += "]";
  }
  out += t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

namespace {

double parse_cell(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(fmt::format("bad number '{}'", s));
  return x;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

Table parse_csv(const std::string& text) {
  Table t;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != t.columns.size())
      throw std::invalid_argument(fmt::format("row has {} cells, header has {}", cells.size(), t.columns.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table parse_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Table t;
  t.comments = j.at("comments").get<std::vector<std::string>>();
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<double> row;
    for (const auto& x : r) row.push_back(x.is_null() ? std::nan("") : x.get<double>());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return path.extension() == ".json" ? parse_json(buf.str()) : parse_csv(buf.str());
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

void write_table(const std::filesystem::path& path, const Table& table, const std::string& format, int precision,
                 const nlohmann::json& meta) {
  write_atomic(path, format == "json" ? to_json(table, precision) : to_csv(table, precision));
  nlohmann::json side = meta;
  side["columns"] = table.columns;
  side["rows"] = table.rows.size();
  side["format"] = format;
  side["precision"] = precision;
  side["written_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::system_clock::now().time_since_epoch())
                                .count();
  std::filesystem::path sidecar = path;
  sidecar += ".meta.json";
  write_atomic(sidecar, side.dump(2) + "\n");
}

}  // namespace tdosc
