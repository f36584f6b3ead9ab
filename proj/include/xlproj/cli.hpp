#ifndef XLPROJ_CLI_HPP_
#define XLPROJ_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace xlproj {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad arguments or configuration
inline constexpr int kExitData = 2;     // unreadable or invalid input
inline constexpr int kExitBackend = 3;  // embedding service failure

// Runs one command line (without the program name). Data goes to `out` or to
// the files named by the arguments, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xlproj

#endif  // XLPROJ_CLI_HPP_
