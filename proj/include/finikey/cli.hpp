#pragma once

#include <iosfwd>

namespace finikey::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // selftest found a disagreement
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitCantCreate = 73;

/// Subcommands rate, sweep, compare, selftest. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finikey::cli
