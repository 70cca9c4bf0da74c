#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace collapse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitUsage = 64;

const std::vector<std::string>& subcommands();

/// Runs one command line (without the program name). Writes data files and a
/// manifest next to the output path; returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collapse::cli
