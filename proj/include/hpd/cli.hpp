#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hpd {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,   // replay produced different results
  kExitParse = 2,      // malformed input, bad flags, unknown names
  kExitDomain = 3,     // violated precondition
  kExitNumerical = 4,  // numerical failure
};

/// Runs the tool with args (without the program name). Reports go to out,
/// diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpd
