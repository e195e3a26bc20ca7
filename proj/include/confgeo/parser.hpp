#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confgeo/expr.hpp"
#include "confgeo/jet.hpp"

namespace confgeo {

/// Parses an expression over x, y<i>, p<i>, q<i> with 1 <= i <= m.
///
/// Precedence from loosest: + - (left), * / (left), unary -, ^ (right,
/// integer-constant exponents). Literals are integers; a/b is a quotient.
/// Errors are ParseError with 1-based positions offset by `line`/`column`.
Expr parse_expression(std::string_view text, int m, int line = 1, int column = 1);

/// Contents of a system definition file.
struct SystemFile {
  int m = 0;
  std::vector<std::string> rhs;  // f1..fm as written
  std::optional<std::string> name;
  std::optional<std::string> expect;
  OdeSystem system;
};

/// Format: "m = <int>" first, then one "f<i> = <expr>" line per equation.
/// '#' starts a comment; "# name: ..." and "# expect: ..." comments carry
/// metadata.
SystemFile parse_system(std::string_view text);
SystemFile read_system_file(const std::string& path);

}  // namespace confgeo
