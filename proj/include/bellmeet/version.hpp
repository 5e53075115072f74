#pragma once

namespace bellmeet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bellmeet
