#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netsel/error.hpp"

namespace netsel::detail {

struct Line {
  std::size_t number;  // 1-based
  std::string text;
};

/// Reads all lines, dropping blank lines and lines starting with '#'.
inline std::vector<Line> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text.front() == '#') continue;
    lines.push_back({number, text});
  }
  return lines;
}

inline std::vector<std::string_view> split_tabs(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(text.substr(start));
      return fields;
    }
    fields.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::optional<double> try_parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return value;
}

inline double parse_double(std::string_view s, std::size_t row,
                           std::size_t column) {
  const auto value = try_parse_double(s);
  if (!value) {
    throw Error(ErrorKind::non_numeric,
                "cannot parse '" + std::string(s) + "' as a number", row,
                column);
  }
  if (!std::isfinite(*value)) {
    throw Error(ErrorKind::non_finite, "value is not finite", row, column);
  }
  return *value;
}

inline std::optional<long long> try_parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

/// Shortest-safe text form of a double: 17 significant digits.
inline std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  return out;
}

}  // namespace netsel::detail
