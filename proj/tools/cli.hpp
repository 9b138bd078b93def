#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qgraph::cli {

/// Exit codes: 0 success (including reported non-convergence), 2 invalid
/// configuration, 3 I/O failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// Runs the command line `args` (args[0] is the program name). Results go
/// to --out when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgraph::cli
