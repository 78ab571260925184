#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dla::cli {

// Exit statuses are part of the command-line contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitLineage = 2;
inline constexpr int kExitDenied = 3;
inline constexpr int kExitIo = 64;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dla::cli
