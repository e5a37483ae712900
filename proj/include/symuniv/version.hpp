#pragma once

namespace symuniv {

inline constexpr const char* kSoftwareName = "symuniv";
inline constexpr const char* kVersion = "0.3.0";

}  // namespace symuniv
