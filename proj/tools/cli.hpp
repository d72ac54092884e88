#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uniprice::cli {

enum ExitCode : int {
  kOk = 0,
  kParseFailure = 1,
  kValidationFailure = 2,
  kEquivalenceFailure = 3,
  kBudgetFailure = 4,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uniprice::cli
