#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covplan {

// Input data is structurally unusable: too few curve points, no growth
// signal, too many failed replicates. Distinct from std::invalid_argument,
// which we reserve for caller contract violations.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. row/col are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
      : std::runtime_error(what), row(row), col(col) {}
  std::size_t row;
  std::size_t col;
};

}  // namespace covplan
