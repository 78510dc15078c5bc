#pragma once

#include <string>

namespace refsde {

/// Shortest representation with 17 significant digits: parse(format(x))
/// recovers x bitwise for every finite double.
std::string format_double(double value);

/// strtod with full-string validation; throws ConfigError on trailing junk.
double parse_double(const std::string& text);

}  // namespace refsde
