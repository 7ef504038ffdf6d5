#pragma once

#include <iosfwd>

namespace bendjoint::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,      // bad arguments, bad script, value out of range
  kBadConfig = 3,
  kIoError = 4,
  kBindFailure = 5,
};

/// Entry point of the `bendjoint` tool; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bendjoint::cli
