#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fdrisk::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kArgumentError = 2, kIoError = 3 };

/// Runs the command line `args` (without the program name); returns the process exit code.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdrisk::cli
