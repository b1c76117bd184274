#pragma once

namespace switchbound {

inline constexpr const char* kVersion = "0.1.0";

// Identity string of the pseudo-random generator stack, recorded in output
// metadata so results are reproducible per build.
inline constexpr const char* kRngId = "xoshiro256** + polar-gaussian/1";

}  // namespace switchbound
