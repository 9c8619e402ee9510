#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eigenlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name).  Documents go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Default worker count: EIGENLAB_WORKERS if set, else the hardware concurrency.
unsigned default_workers();

}  // namespace eigenlab::cli
