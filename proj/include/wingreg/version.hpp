#pragma once

namespace wingreg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wingreg
