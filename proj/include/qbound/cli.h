#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbound::cli {

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kUsage = 2,
    kInput = 3,
    kCap = 4,
};

// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbound::cli
