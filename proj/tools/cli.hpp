#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fewbody::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,              ///< success, including "unstable" verdicts
  kUsage = 2,           ///< invalid flags or values
  kNotConverged = 3,    ///< solver failure or non-convergence
  kToleranceFail = 4,   ///< a reference comparison missed its tolerance
};

inline constexpr const char* kVersion = "1.0.0";

/// Runs one command line (without the program name) and returns its exit
/// code. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Formats `value` with six significant digits and reads it back.
double six_digits(double value);

}  // namespace fewbody::cli
