#pragma once

#include <iosfwd>

namespace saddlekit {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCertifyFailed = 1,
  kExitParseError = 2,
  kExitConfigMismatch = 3,
  kExitInsufficientData = 4,
  kExitOtherError = 5,
};

// Entry point of the `saddlekit` tool, writing to the given streams instead
// of stdout/stderr so it can be driven in-process.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saddlekit
