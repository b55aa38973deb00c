#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tfuncert::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;  // an inequality was violated or a solve did not converge
inline constexpr int kExitDomain = 2;   // domain or usage error in the request
inline constexpr int kExitUsage = 64;   // malformed invocation

// Runs the command line `args` (without the program name). Reports go to
// `out` as JSON lines (or aligned text for `constants --format text`);
// diagnostics go to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tfuncert::cli
