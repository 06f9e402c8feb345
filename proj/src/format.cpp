#include "mdspin/format.hpp"

#include <cstdio>

namespace mdspin {

std::string format_number(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.16e", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace mdspin
