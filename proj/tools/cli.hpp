#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entrolab::cli {

// Exit codes: 0 success, 1 failed self-test checks, 2 invalid input,
// 3 solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

// args excludes the program name. Results go to `out` unless --output is
// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entrolab::cli
