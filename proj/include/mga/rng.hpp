#pragma once

#include <cstdint>
#include <random>

namespace mga {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Child stream for (seed, a, b); independent of the order streams are made in.
inline Rng child_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    const std::uint64_t s = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
    return Rng(s);
}

// Uniform in [0, 1) with 53 random bits; same sequence on every platform,
// unlike std::uniform_real_distribution.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n), n > 0; rejects the biased tail before the modulo.
inline std::uint64_t uniform_index(Rng &rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

} // namespace mga
