#ifndef EGAUDIN_CLI_COMMANDS_HPP
#define EGAUDIN_CLI_COMMANDS_HPP

#include <iosfwd>

namespace egaudin::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kNumericalFailure = 3,
  kVerificationFailure = 4,
};

/// Parses argv and runs one subcommand (special, three-spin, acsm, verify).
/// Tables go to `out` (or the --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace egaudin::cli

#endif  // EGAUDIN_CLI_COMMANDS_HPP
