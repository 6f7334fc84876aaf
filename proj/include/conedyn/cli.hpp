#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conedyn::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUnbounded = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitSearchExhausted = 4;
inline constexpr int kExitViolation = 5;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace conedyn::cli
