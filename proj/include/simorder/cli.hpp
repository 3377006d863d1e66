#pragma once

#include <iosfwd>

namespace simorder {

inline constexpr int kExitOk = 0;
inline constexpr int kExitEval = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `simorder` tool: subcommands transform, eval, sweep and
/// report. Returns 0 on success, 1 on evaluation errors, 2 on usage or I/O
/// errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace simorder
