#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace instanton::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kVerdictInvalid = 1,
    kUsageError = 2,
    kNumericalFailure = 3,
};

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace instanton::cli
