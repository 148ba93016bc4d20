#pragma once

#include <charconv>
#include <cstdlib>
#include <string>
#include <system_error>

#include "fairway/error.hpp"

namespace fairway {

// Shortest round-trip decimal form. Reparsing the string yields the exact
// same double, which is what makes rerun outputs byte-identical.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw Error("IoError", "failed to format floating point value");
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw Error("IoError", "not a number: '" + s + "'");
  return v;
}

}  // namespace fairway
