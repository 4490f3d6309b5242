#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace enuminst {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;

/// Runs the command line `args` (program name excluded) and returns the
/// process exit code. Subcommands: solve, enumerate, bench.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace enuminst
