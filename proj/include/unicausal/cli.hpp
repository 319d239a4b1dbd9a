#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace unicausal::cli {

/// Exit codes of `run`.
enum ExitCode : int { ok = 0, violation = 1, usage = 2 };

/// Parses `args` (without the program name), dispatches one subcommand and
/// writes the report to `out`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace unicausal::cli
