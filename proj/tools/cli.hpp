#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace omq::cli {

enum ExitCode : int { kPositive = 0, kNegative = 1, kFailure = 2 };

/// Runs the `omq` command line on `args` (without the program name).
/// Verdicts and results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omq::cli
