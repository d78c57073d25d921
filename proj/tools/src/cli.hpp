#pragma once

#include <iosfwd>

namespace trimlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

// Entry point of the `trimlab` tool. Reports go to --out when given,
// otherwise to `out`; diagnostics go to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace trimlab::cli
