#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coverdx {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitDomainError = 1, kExitUsage = 2 };

/// Runs one CLI invocation. `args` excludes the program name. Subcommands:
/// kbcheck, diagnose, consult, rulegen, cluster, estimate, serve.
/// Errors go to `err` prefixed with "error:".
int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                std::ostream& err);

}  // namespace coverdx
