#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qplane {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

/// Runs one command line (without the program name).  Subcommands:
/// normalize, rep-check, grid-check, norm, character, p-function.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qplane
