#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stablecrd::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kMismatch = 1,
    kParseError = 2,
    kCapExceeded = 3,
    kUnsupportedClass = 4,
    kUncertifiable = 5,
};

/// Runs one command line (args excludes the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablecrd::cli
