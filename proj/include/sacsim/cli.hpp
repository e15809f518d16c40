#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sac {
namespace cli {

// Stable exit-code contract of the sacsim tool.
enum ExitCode : int {
    kOk = 0,
    kConfigParse = 2,
    kValidation = 3,
    kDivergence = 4,
    kIo = 5,
};

// Runs the command-line front end on args (without the program name).
// All output goes to the supplied streams so tests can drive it in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cli
} // namespace sac
