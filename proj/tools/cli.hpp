#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ks::cli {

// Runs one command (args exclude the program name) and returns the exit
// code: 0 for any computed verdict, 2 parse/usage, 3 degree cap, 4
// incomplete resolution, 5 failed precondition, 1 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ks::cli
