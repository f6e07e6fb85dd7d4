#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mfgp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kConfigError = 2,
    kNumericalFailure = 3,
};

/// Parses the command line and runs one command. Errors are reported on `err` and mapped to
/// an exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mfgp::cli
