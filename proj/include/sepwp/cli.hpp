#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sepwp::cli {

/// Exit codes: 0 success, 1 analysis-level failure or runtime error,
/// 2 usage or config error.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

} // namespace sepwp::cli
