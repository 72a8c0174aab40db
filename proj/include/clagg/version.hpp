#pragma once

namespace clagg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace clagg
