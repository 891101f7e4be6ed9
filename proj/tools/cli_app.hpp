#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace selfsim::cli {

inline constexpr const char* version = "0.1.0";

/// Runs the command line `args` (args[0] is the program name). Exit codes:
/// 0 success, 1 verification failure or runtime error, 2 invalid input,
/// 3 undetermined shot.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

}  // namespace selfsim::cli
