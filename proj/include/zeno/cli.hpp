#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace zeno {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `zeno` tool. `args` excludes the program name.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace zeno
