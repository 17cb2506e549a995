#pragma once

#include <iosfwd>

namespace kaccess::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kBadArgs = 2,
    kInvalidData = 3,
    kNonConvergence = 4,
    kMissingInput = 5,
};

/// Entry point shared by the executable and the tests. Failures print a
/// single-line JSON object {"error", "message", "exitCode"} to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kaccess::cli
