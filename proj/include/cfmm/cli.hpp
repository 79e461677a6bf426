#pragma once

namespace cfmm {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitClean = 0,
  kExitUsage = 1,
  kExitFinding = 2,  // an arbitrage witness or invariant violation was found
};

/// Runs one cfmmcheck subcommand: catalog, analyze, fuzz, solve-stableswap,
/// verify-witness or theorems. Writes the JSON report to stdout or --output
/// and diagnostics to stderr.
int run_command(int argc, const char* const* argv);

}  // namespace cfmm
