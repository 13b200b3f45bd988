#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qnl_eam::csv {

using Cell = std::variant<std::string, int, double>;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Table {
public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != header_.size())
      throw std::invalid_argument("csv: row has " + std::to_string(row.size()) + " cells, header has " +
                                  std::to_string(header_.size()));
    rows_.push_back(std::move(row));
  }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::string s;
    auto line = [&](const auto& cells, auto&& fmt) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += fmt(cells[i]);
      }
      s += "\r\n";
    };
    line(header_, [](const std::string& h) { return quote(h); });
    for (const auto& r : rows_)
      line(r, [](const Cell& c) {
        if (auto* d = std::get_if<double>(&c)) return format_double(*d);
        if (auto* i = std::get_if<int>(&c)) return std::to_string(*i);
        return quote(std::get<std::string>(c));
      });
    return s;
  }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Writes through a temporary file in the same directory, then renames.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qnl_eam::csv
