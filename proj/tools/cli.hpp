#pragma once

#include <string>
#include <vector>

namespace ftnisac::cli {

/// Runs the command line tool on `args` (without the program name).
/// Returns the process exit code: 0 on success, 2 on usage errors,
/// 3 on numerical failures.
int run(const std::vector<std::string>& args);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ftnisac::cli
