#pragma once

#include <string>
#include <string_view>

namespace selfsim {

/// Shortest decimal that parses back to the same double (std::to_chars).
/// Non-finite values become "inf", "-inf" or "nan".
std::string shortest(double x);

/// Inverse of `shortest`; accepts the same tokens. Throws InvalidArgument on
/// trailing garbage or an empty field.
double parse_double(std::string_view text);

}  // namespace selfsim
