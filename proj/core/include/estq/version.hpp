#pragma once

namespace estq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace estq
