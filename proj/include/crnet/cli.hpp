#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crnet::cli {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kJobsEnv = "CRNET_JOBS";

enum ExitCode : int {
    exit_ok = 0,
    exit_incomplete = 1, ///< infeasible or non-converged runs; outputs written
    exit_usage = 2,
};

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace crnet::cli
