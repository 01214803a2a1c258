#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chatelet::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kUsageError = 2 };

/// Parses argv (argv[0] is the program name), runs one subcommand and writes
/// its result to out in a single write. Diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Formats with 12 significant digits.
std::string format_number(double value);

}  // namespace chatelet::cli
