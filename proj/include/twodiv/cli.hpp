#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twodiv::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailed = 1,
    kBadInput = 2,
    kNoConvergence = 3,
};

/// Entry point of the `twodiv` command. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twodiv::cli
