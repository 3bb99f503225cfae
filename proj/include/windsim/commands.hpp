// Command-line front end.
//
//   windsim simulate  traces, CDFs and joint histogram of one campaign
//   windsim curve     steady-state power curve
//   windsim compare   paired dynamic/static campaign with KS distance
//   windsim stats     summary and CDF of an existing trace file
#pragma once

#include <iosfwd>

namespace windsim {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitMissingFile = 3,
    kExitSyntax = 4,
    kExitUnknownKey = 5,
    kExitInvariant = 6,
    kExitSimulation = 7,
    kExitIo = 8,
};

/// Runs one command. Diagnostics go to `err`, progress lines to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace windsim
