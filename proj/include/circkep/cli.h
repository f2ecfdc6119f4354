#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circkep {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIntegration = 2,   // NonFinite, MaxSteps or step underflow
  kExitUndetermined = 3,  // classify could not decide the regime
  kExitVerifyFailed = 4,  // some acceptance criterion failed
};

/// Runs the tool on `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace circkep
