#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdlab::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kPhysicsError = 3,
  kOptimizerFlag = 4,
};

/// Runs one subcommand (discord, dynamics, witness, tomo, prepare).
/// `args` excludes the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdlab::cli
