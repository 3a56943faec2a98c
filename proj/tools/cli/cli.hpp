#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rootflow::cli {

enum ExitCode : int {
  kPass = 0,         // checks passed or were informational
  kCheckFailed = 1,  // a verified property did not hold
  kUsage = 2,        // bad flags, unreadable or malformed input
  kNumeric = 3,      // non-convergence, singular systems, exhausted series order
};

/// Runs one command line (without the program name). Reports go to `out`
/// (or the --out file); diagnostics and summary lines go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rootflow::cli
