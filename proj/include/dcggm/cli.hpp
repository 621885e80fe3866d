#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dcggm {

/// Exit codes: 0 success, 1 usage or validation, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

/// Entry point of the `dcggm` tool (generate, fit, experiment, plot).
/// args[0] is the program name. Diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& err);

}  // namespace dcggm
