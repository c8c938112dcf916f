#ifndef QMETRO_ERRORS_HPP
#define QMETRO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmetro {

// Bad user-facing input (unknown key, parameter out of range). Maps to exit
// code 2 at the CLI boundary.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure (truncation leak, non-finite intermediate, degenerate
// denominator). Maps to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qmetro

#endif
