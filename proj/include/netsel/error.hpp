#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netsel {

enum class ErrorKind {
  io,
  malformed_header,
  ragged_row,
  non_numeric,
  non_finite,
  duplicate_id,
  unknown_id,
  self_loop,
  duplicate_edge,
  non_positive_weight,
  empty_intersection,
  dimension_mismatch,
  invalid_argument,
  constant_phenotype,
  no_admissible_model,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::malformed_header: return "malformed_header";
    case ErrorKind::ragged_row: return "ragged_row";
    case ErrorKind::non_numeric: return "non_numeric";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::duplicate_id: return "duplicate_id";
    case ErrorKind::unknown_id: return "unknown_id";
    case ErrorKind::self_loop: return "self_loop";
    case ErrorKind::duplicate_edge: return "duplicate_edge";
    case ErrorKind::non_positive_weight: return "non_positive_weight";
    case ErrorKind::empty_intersection: return "empty_intersection";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::constant_phenotype: return "constant_phenotype";
    case ErrorKind::no_admissible_model: return "no_admissible_model";
  }
  return "unknown";
}

/// Every failure raised by the library. Row and column are 1-based file
/// coordinates when the error comes from a parser, 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::size_t row = 0,
        std::size_t column = 0)
      : std::runtime_error(format(kind, what, row, column)),
        kind_(kind),
        row_(row),
        column_(column) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(ErrorKind kind, const std::string& what,
                            std::size_t row, std::size_t column) {
    std::string msg = std::string(to_string(kind)) + ": " + what;
    if (row > 0) {
      msg += " (row " + std::to_string(row);
      if (column > 0) msg += ", column " + std::to_string(column);
      msg += ")";
    }
    return msg;
  }

  ErrorKind kind_;
  std::size_t row_;
  std::size_t column_;
};

}  // namespace netsel
