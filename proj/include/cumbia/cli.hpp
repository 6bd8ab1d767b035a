#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cumbia::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs one command line (argv[0] is the program name). Never throws.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace cumbia::cli
