#pragma once

namespace kisched {

inline constexpr const char* kToolName = "kisched";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace kisched
