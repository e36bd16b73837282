#pragma once

namespace su11 {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "su11";

}  // namespace su11
