#pragma once

#include <cstdint>

namespace carleson {

// splitmix64: deterministic across platforms, unlike std distributions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double rng_u01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Golden-ratio style constants for low-discrepancy sequences.
inline constexpr double kGolden1 = 0.6180339887498949;   // 1/phi
inline constexpr double kR2a = 0.7548776662466927;       // 1/rho, rho^3 = rho + 1
inline constexpr double kR2b = 0.5698402909980532;       // 1/rho^2

} // namespace carleson
