#pragma once

#include <iosfwd>

namespace draftvec::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInput = 2,
    kOutput = 3,
};

/// Entry point of the draftvec tool; returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace draftvec::cli
