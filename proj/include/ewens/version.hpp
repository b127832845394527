#pragma once

namespace ewens {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ewens
