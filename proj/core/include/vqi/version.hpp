#pragma once

namespace vqi {

inline constexpr const char* kToolName = "vqi";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace vqi
