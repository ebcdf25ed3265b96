#pragma once

#include <iosfwd>

namespace fgl::cli {

/// Exit codes: 0 success (a detected blow-up is a success), 1 usage or
/// configuration error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Environment variable that overrides the output directory.
inline constexpr const char* kOutDirVariable = "FGL_OUT_DIR";

/// fgl <command> [--config path] [--section.key value]... [--seed n]
///     [--workers n] [--out-dir path]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fgl::cli
