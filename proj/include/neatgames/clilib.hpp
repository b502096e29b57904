#pragma once
// The command-line surface, exposed as a library function so tests can call
// it in-process.  Exit codes: 0 success; 1 definite negative when --expect
// is unmet; 2 usage or input error; 3 inconclusive within budget.

#include <string>
#include <vector>

namespace neatgames::cli {

struct RunResult {
  int exit_code = 0;
  std::string out;  // captured stdout
  std::string err;  // captured stderr
};

int run_main(int argc, char** argv);                  // used by the binary
RunResult run_command(const std::vector<std::string>& args);  // used by tests

}  // namespace neatgames::cli
