#include "prodrank/format.hpp"

#include <charconv>
#include <cmath>

#include "prodrank/errors.hpp"

namespace prodrank {

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    fail(ErrorKind::Domain, "cannot format a non-finite value");
  }
  if (value == 0.0) return "0";  // fold -0 into 0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    fail(ErrorKind::Domain, "double formatting failed");
  }
  return std::string(buf, ptr);
}

}  // namespace prodrank
