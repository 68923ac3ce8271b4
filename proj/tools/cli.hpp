#ifndef SEMGRAPH_TOOLS_CLI_HPP
#define SEMGRAPH_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace semgraph::cli {

inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kUsageError = 2;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace semgraph::cli

#endif  // SEMGRAPH_TOOLS_CLI_HPP
