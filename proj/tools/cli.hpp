#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace delaycert::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitCertified = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 3;

// Parses argv (program name first) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace delaycert::cli
