#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fca::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

// Entry point behind the fca binary; args excludes the program name.
// Results go to --out when given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fca::cli
