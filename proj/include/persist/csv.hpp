#pragma once

// Minimal CSV I/O: one header row, comma separated, no quoting. Cells that
// are missing or not numeric are hard errors; there is no imputation.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "persist/error.hpp"
#include "persist/text_spec.hpp"

namespace persist {

/// Shortest text that parses back to exactly `v` (17 significant digits).
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
public:
  static CsvTable parse(std::istream& in, const std::string& source = "<input>") {
    CsvTable t;
    t.source_ = source;
    std::string line;
    if (!std::getline(in, line)) throw data_error(source + ": missing header row");
    strip_cr(line);
    t.header_ = split(line, ',');
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      if (trim(line).empty()) continue;
      auto cells = split(line, ',');
      if (cells.size() != t.header_.size()) {
        throw data_error(source + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                         " cells, header has " + std::to_string(t.header_.size()));
      }
      t.rows_.push_back(std::move(cells));
      t.line_numbers_.push_back(line_no);
    }
    return t;
  }

  static CsvTable read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open input file '" + path + "'");
    return parse(in, path);
  }

  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t rows() const noexcept { return rows_.size(); }

  /// Resolves a column by header name, falling back to a 0-based index.
  std::size_t column_index(const std::string& selector) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (header_[i] == selector) return i;
    }
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), idx);
    if (ec == std::errc{} && ptr == selector.data() + selector.size() && idx < header_.size()) return idx;
    throw data_error(source_ + ": no column '" + selector + "'");
  }

  bool has_column(const std::string& name) const {
    for (const auto& h : header_) {
      if (h == name) return true;
    }
    return false;
  }

  std::vector<double> numeric_column(const std::string& selector) const {
    const std::size_t col = column_index(selector);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::string& cell = rows_[r][col];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw data_error(source_ + ": row " + std::to_string(line_numbers_[r]) + ", column '" + header_[col] +
                         "': " + (cell.empty() ? std::string("missing value") : "non-numeric value '" + cell + "'"));
      }
      out.push_back(v);
    }
    if (out.empty()) throw data_error(source_ + ": no data rows");
    return out;
  }

  std::vector<int> integer_column(const std::string& selector) const {
    const std::size_t col = column_index(selector);
    std::vector<int> out;
    out.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::string& cell = rows_[r][col];
      int v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw data_error(source_ + ": row " + std::to_string(line_numbers_[r]) + ", column '" + header_[col] +
                         "': " + (cell.empty() ? std::string("missing value") : "non-integer value '" + cell + "'"));
      }
      out.push_back(v);
    }
    if (out.empty()) throw data_error(source_ + ": no data rows");
    return out;
  }

  std::vector<std::string> text_column(const std::string& selector) const {
    const std::size_t col = column_index(selector);
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row[col]);
    return out;
  }

private:
  static void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  }

  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> line_numbers_;
};

/// Column-oriented writer; every column must have the same length.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw usage_error("CSV row width does not match header");
    rows_.push_back(std::move(cells));
  }

  std::string str() const {
    std::ostringstream os;
    write_line(os, header_);
    for (const auto& row : rows_) write_line(os, row);
    return os.str();
  }

private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << cells[i];
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace persist
