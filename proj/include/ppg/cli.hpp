#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ppg {

/// Dispatches one command line (without the program name). Returns the
/// process exit code: 0 success, 1 usage, 2 invalid input, 3 failed check.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace ppg
