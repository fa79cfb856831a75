#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace slsvm::cli {

enum ExitCode : int {
  kOk = 0,
  kBudgetExhausted = 1,
  kInvalidInput = 2,
  kStuck = 3,
  kBoundaryViolation = 4,
  kMismatch = 5,
};

// Runs one command line (program name excluded) and returns its exit code.
// Subcommands: compile, simulate, emulate, verify, demo.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slsvm::cli
