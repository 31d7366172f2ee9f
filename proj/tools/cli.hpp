#pragma once

#include <iosfwd>

namespace ibtree::cli {

/// Exit codes of every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;  // also "inconsistent" for validate
inline constexpr int kExitIo = 2;

/// Entry point shared by the executable and the in-process tests. Output
/// files named "-" go to `out`; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ibtree::cli
