#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsd::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIngest = 3;
inline constexpr int kExitRuntime = 4;

// Runs one `fsd` invocation. `args` excludes the program name. Results go to `out`
// (or the --out file); diagnostics and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsd::cli
