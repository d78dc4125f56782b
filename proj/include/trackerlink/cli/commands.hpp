#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trackerlink::cli {

enum ExitCode : int { kExitOk = 0, kExitPartial = 1, kExitUsage = 2 };

/// Full command-line entry point. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace trackerlink::cli
