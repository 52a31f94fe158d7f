#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace galoiscache::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;  // verify found violations
inline constexpr int kExitInvalid = 2;     // bad flags, config, trace or field
inline constexpr int kExitInternal = 3;

// Runs the tool with args[0] as the program name. Reports go to `out` (unless
// --output is given), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace galoiscache::cli
