#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netforge::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kSchema = 2,
  kBuild = 3,
  kUnknownDialect = 4,
  kLint = 5,
};

/// Runs the command line `args` (without the program name). `env_seed` is
/// the value of NETFORGE_SEED, empty if unset.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::string& env_seed = {});

}  // namespace netforge::cli
