#pragma once

#include <string>
#include <string_view>

namespace landmarkbm {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Locale-independent dot-decimal parse of the whole string. Throws
/// std::invalid_argument on trailing garbage or an empty field.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

}  // namespace landmarkbm
