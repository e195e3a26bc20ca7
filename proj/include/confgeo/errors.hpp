#pragma once

#include <stdexcept>
#include <string>

namespace confgeo {

/// Malformed expression: a quotient whose denominator is identically zero,
/// an exponent overflow, or an index outside the system dimension.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation hit a vanishing denominator.
class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& subexpression)
      : std::runtime_error("pole at sample point in " + subexpression),
        subexpression_(subexpression) {}

  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Syntax or semantic error in textual input, with a 1-based position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace confgeo
