#pragma once

#include <iosfwd>

namespace spdgeo::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kSolverError = 3,
  kNoConvergence = 4,
};

/// Runs the `spdgeo` command line: dist, interpolate, mean, gen,
/// exp-shrinkage, exp-midpoint, exp-sparsity.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spdgeo::cli
