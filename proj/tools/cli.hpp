#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace raycut::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitData = 3;

/// Entry point for `raycut <segment|eval|phantom|serve> ...`. argv[0] is the
/// program name. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace raycut::cli
