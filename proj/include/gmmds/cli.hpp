#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmmds::cli {

enum ExitCode : int { affirmative = 0, negative = 1, usage_error = 2, inconclusive = 3 };

/// Runs one command line (args[0] is the program name). JSON or table
/// output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmmds::cli
