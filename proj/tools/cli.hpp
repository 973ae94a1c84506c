#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "symext/states.hpp"

namespace symext::cli {

enum ExitCode : int { kFeasible = 0, kNotFeasible = 1, kUsage = 2, kResource = 3 };

/// Built-in states: `werner:d:alpha` or `mixed:dims` with dims like `2x3`
/// or `2,3`. Throws InvalidArgument on anything else.
DensityMatrix parse_state(const std::string& spec);

/// Full command line, argv[0] included. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symext::cli
