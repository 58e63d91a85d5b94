#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crapper {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitInvalidInput = 3;
inline constexpr int kExitUsage = 64;

// args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

}  // namespace crapper
