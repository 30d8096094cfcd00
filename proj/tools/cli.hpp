#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace firmcomp::cli {

enum ExitCode : int {
    success = 0,
    validation_failed = 1,
    not_converged = 2,
    unknown_scenario = 3,
    bad_configuration = 4,
};

/// Run the command line `args` (without the program name). CSV goes to `out` unless --output is
/// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace firmcomp::cli
