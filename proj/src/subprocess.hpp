#pragma once

#include <string>
#include <vector>

namespace nnc {

struct ProcessResult {
  bool spawned = false;
  bool timed_out = false;
  int exit_code = -1;
  std::string output;       // child stdout
  std::string error;        // spawn diagnostics
};

// Runs argv[0] with the given arguments, writes `input` to its stdin,
// closes it, and reads stdout until EOF or until the deadline passes.
// On deadline the child is killed with SIGKILL. stderr is inherited.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& input, double deadline_seconds);

}  // namespace nnc
