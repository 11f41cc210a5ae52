#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ebpois {

enum ExitCode { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitSolver = 4 };

/// Entry point of the ebpois tool. args[0] is the program name. Returns the
/// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebpois
