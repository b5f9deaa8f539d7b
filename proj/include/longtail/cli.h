#pragma once

#include <string>
#include <vector>

namespace longtail {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

// Runs the tool on argv-style arguments (args[0] is the program name).
int RunCli(const std::vector<std::string>& args);

}  // namespace longtail
