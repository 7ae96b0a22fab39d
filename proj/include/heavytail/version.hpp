#pragma once

namespace heavytail {

inline constexpr const char* kVersion = "0.1.0";

}
