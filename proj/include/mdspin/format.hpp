#pragma once

#include <string>

namespace mdspin {

// Scientific notation with 17 significant digits; parses back bit-exactly.
std::string format_number(double v);

}  // namespace mdspin
