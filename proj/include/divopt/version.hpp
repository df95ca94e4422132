#pragma once

namespace divopt {

inline constexpr const char* kArtifactName = "divopt";
inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace divopt
