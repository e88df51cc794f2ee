#pragma once

#include <iosfwd>

namespace topk {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitVerifyFailed = 3,
  kExitCorruptIndex = 4,
};

// Runs `topkdoc <subcommand> ...` with output and diagnostics sent to the
// given streams. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace topk
