#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cbd {

/// Process exit codes. Verdicts travel through the exit status so shell
/// pipelines can tell "contextual" apart from failures.
enum ExitCode : int {
  kExitNoncontextual = 0,
  kExitInputError = 1,
  kExitInternalError = 2,
  kExitContextual = 3,
};

/// Runs the command line `args` (args[0] is the program name). Reports go
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace cbd
