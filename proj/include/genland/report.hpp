#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "genland/error.hpp"

namespace genland {

using Cell = std::variant<double, std::int64_t, std::string>;

/// %.17g, so every double survives a text round trip.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

inline nlohmann::json cell_to_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

/// Named columns, rows in insertion order.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      throw DimensionError("Table: row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
  }

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i] == name) return i;
    throw RangeError("Table: no column '" + name + "'");
  }

  std::vector<double> numeric_column(const std::string& name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) {
      if (const auto* d = std::get_if<double>(&row[c])) {
        out.push_back(*d);
      } else if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
        out.push_back(static_cast<double>(*i));
      } else {
        throw RangeError("Table: column '" + name + "' is not numeric");
      }
    }
    return out;
  }

  std::string to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out += ',';
      out += format_cell(columns_[i]);
    }
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_cell(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  nlohmann::json rows_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows_) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = cell_to_json(row[i]);
      arr.push_back(std::move(obj));
    }
    return arr;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct GridAxis {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

/// Parameter grid (1D or 2D) plus one row of observables per grid point.
///
/// The table's leading columns are the axis names; rows run with the first
/// axis fastest. An optional boolean-valued `degenerate` column licenses NaN
/// cells in its row.
struct SweepReport {
  std::vector<GridAxis> axes;
  Table table;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t grid_size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
  }

  void validate() const {
    if (axes.empty() || axes.size() > 2) throw DimensionError("SweepReport: one or two grid axes");
    if (table.size() != grid_size()) {
      throw DimensionError("SweepReport: " + std::to_string(table.size()) + " rows for a grid of " +
                           std::to_string(grid_size()));
    }
    std::size_t flag = table.columns().size();
    for (std::size_t i = 0; i < table.columns().size(); ++i)
      if (table.columns()[i] == "degenerate") flag = i;
    for (const auto& row : table.rows()) {
      bool licensed = false;
      if (flag < row.size()) {
        if (const auto* v = std::get_if<std::int64_t>(&row[flag])) licensed = *v != 0;
      }
      for (const auto& c : row) {
        const auto* d = std::get_if<double>(&c);
        if (d && std::isnan(*d) && !licensed) throw DegenerateError("SweepReport: NaN in a non-degenerate row");
      }
    }
  }

  std::string to_csv() const { return table.to_csv(); }

  nlohmann::json to_json() const {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& a : axes) grid.push_back({{"name", a.name}, {"unit", a.unit}, {"values", a.values}});
    return {{"metadata", metadata}, {"grid", grid}, {"columns", table.columns()}, {"rows", table.rows_json()}};
  }
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace genland
