#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace collinlab {

/// Runs the command-line tool on `args` (argv without the program name),
/// writing reports to `out` and error messages to `err`.
///
/// Exit codes: 0 clean, 1 operational error (bad input, unreadable file,
/// failed fit), 2 diagnostic alarm (strong collinearity or unstable
/// coefficients) as a scriptable signal.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collinlab
