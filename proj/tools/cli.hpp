#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace veerkit {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,          // bad flags, unreadable or malformed input, other library errors
    kExitBuild = 2,          // NotPseudoAnosov, HorizontalOrVerticalSaddle, BoundExhausted
    kExitNonGeometric = 3,
    kExitContainsFlat = 4,
    kExitNoConvergence = 5,
    kExitBudget = 6,
    kExitNotNonGeometric = 7,
    kExitParity = 8,
    kExitNotCertified = 9,   // verification failed, or check rejected a certificate
};

// Runs one command line (arguments without the program name).  Data goes to
// `out`, logs and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace veerkit
