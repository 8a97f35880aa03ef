#pragma once

#include <iosfwd>

namespace bev::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitGeometry = 3;

/// Runs one bevtool invocation. Reports go to out, one-line diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bev::cli
