#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace egab::cli {

/// Process exit statuses.
enum ExitCode : int {
    kSuccess = 0,
    kInternalError = 1,
    kUsageError = 2,
    kDataError = 3,
};

/// Entry point shared by the `egab` executable and the tests. `args` excludes
/// the program name. Reports go to `out` unless --output is given;
/// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace egab::cli
