#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace ndpolar {

/// Exit codes of the command-line interface.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_validation = 2, exit_runtime = 3 };

/// Runs one CLI invocation. `args[0]` is the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ndpolar
