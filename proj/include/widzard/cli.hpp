#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace widzard {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitSatisfied = 0,
  kExitNotSatisfied = 1,
  kExitUsage = 2,
  kExitUndecided = 3,
};

/// Runs the tool on `args` (without the program name). Reports go to `out`,
/// the core banner and diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

std::string usage();

} // namespace widzard
