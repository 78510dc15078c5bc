#include "refsde/format.hpp"

#include <cstdio>
#include <cstdlib>

#include "refsde/errors.hpp"

namespace refsde {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  if (text.empty()) {
    throw ConfigError("expected a number, got empty field");
  }
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw ConfigError("malformed number: \"" + text + "\"");
  }
  return value;
}

}  // namespace refsde
