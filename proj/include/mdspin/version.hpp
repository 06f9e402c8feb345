#pragma once

namespace mdspin {
inline constexpr const char* kVersion = "0.1.0";
}
