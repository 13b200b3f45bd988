#pragma once

// `key = value` text format shared by potential definitions and experiment
// configs. Blank lines and lines starting with '#' are skipped.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qnl_eam/errors.hpp"

namespace qnl_eam::kv {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<Entry> parse(std::istream& in) {
  std::vector<Entry> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line);
    Entry e{std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))), line};
    if (e.key.empty()) throw ParseError("empty key", line);
    if (e.value.empty()) throw ParseError("empty value for key '" + e.key + "'", line);
    for (const Entry& prev : out)
      if (prev.key == e.key)
        throw ParseError("duplicate key '" + e.key + "' (first on line " +
                             std::to_string(prev.line) + ")",
                         line);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<Entry> parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

inline std::vector<Entry> parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return parse(in);
}

inline double to_double(const Entry& e) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError("key '" + e.key + "': not a number: '" + e.value + "'", e.line);
  return v;
}

inline int to_int(const Entry& e) {
  int v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError("key '" + e.key + "': not an integer: '" + e.value + "'", e.line);
  return v;
}

/// Comma-separated list of values.
inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace qnl_eam::kv
