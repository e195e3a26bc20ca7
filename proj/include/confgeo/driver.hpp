#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace confgeo {

inline constexpr int kExitConformal = 0;
inline constexpr int kExitNotConformal = 1;
inline constexpr int kExitInputError = 2;

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run_check(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace confgeo
