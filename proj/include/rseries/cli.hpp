#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rseries::cli {

inline constexpr int kExitDecisive = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rseries::cli
