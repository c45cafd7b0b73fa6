#pragma once

namespace specsel {

inline constexpr const char* kToolName = "specsel";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kModelSchemaVersion = 1;

}  // namespace specsel
