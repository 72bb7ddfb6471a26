#pragma once

#include <iosfwd>

namespace prpca {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNumericError = 2;

/// Runs `prpca <track|eval|plot|decompose> ...`. Diagnostics and log lines go to `err`,
/// help text to `out`. Log verbosity comes from PRPCA_VERBOSE (0 quiet, 1 info, 2 debug).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace prpca
