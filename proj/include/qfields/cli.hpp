#pragma once

#include <iosfwd>

namespace qf::cli {

enum ExitCode : int {
    kOk = 0,
    kRejected = 1,     // a construction or theorem hypothesis failed
    kIncomplete = 2,   // a budget ran out; nothing was decided
    kUsage = 3,
    kAnomaly = 4,      // a computed fact contradicts the expected one
};

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// Data goes to out, diagnostics and progress to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qf::cli
