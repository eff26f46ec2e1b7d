#pragma once

namespace egda {

inline constexpr const char* kArtifactName = "egda";
inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace egda
