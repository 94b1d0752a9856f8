#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcgraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one `pcgraph` invocation. `args` excludes the program name. Data goes
/// to files or `out`; diagnostics and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcgraph::cli
