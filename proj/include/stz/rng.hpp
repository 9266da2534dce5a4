#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams. Every draw is a pure function of
// (master seed, sample index, level, mode index, axis), so Monte Carlo
// loops reproduce bit-for-bit regardless of evaluation order.

namespace stz::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Substream key for (sample, level, mode, axis). Level 0 is the per-cell
// randomization (omega), level 1 the per-function one (omega tilde).
inline std::uint64_t derive(std::uint64_t master, std::uint64_t sample,
                            std::uint64_t level, std::int64_t mode,
                            std::uint64_t axis = 0) {
    std::uint64_t h = splitmix64(master ^ 0x6a09e667f3bcc908ULL);
    h = splitmix64(h ^ splitmix64(sample + 0x1000));
    h = splitmix64(h ^ splitmix64(level + 0x2000));
    h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(mode) + 0x3000));
    h = splitmix64(h ^ splitmix64(axis + 0x4000));
    return h;
}

inline double to_unit(std::uint64_t h) {
    // 53-bit mantissa in (0,1); never exactly 0, safe for log().
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

inline double rademacher(std::uint64_t key) {
    return (key & 1ULL) ? 1.0 : -1.0;
}

inline double gaussian(std::uint64_t key) {
    const double u1 = to_unit(splitmix64(key ^ 0x5851f42d4c957f2dULL));
    const double u2 = to_unit(splitmix64(key ^ 0x14057b7ef767814fULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace stz::rng
