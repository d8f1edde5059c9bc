#ifndef BGROUND_FORMAT_HPP
#define BGROUND_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "bground/errors.hpp"

namespace bground {

/// Formats a double with 17 significant digits, which is enough for
/// strtod to recover the identical bit pattern. Non-finite values are
/// written as "nan", "inf" and "-inf".
inline std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buffer[40];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::general, 17);
  return std::string(buffer, end);
}

inline double parse_double(std::string_view text) {
  std::string owned(text);
  char* end = nullptr;
  double value = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) {
    throw ValidationError("not a number: '" + owned + "'");
  }
  return value;
}

}  // namespace bground

#endif  // BGROUND_FORMAT_HPP
