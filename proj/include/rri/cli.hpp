#pragma once

#include <string>
#include <vector>

namespace rri {

// Entry point for the `rri` command-line tool. Returns the process exit
// code: 0 success, 1 bad input/arguments, 2 numerical failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace rri
