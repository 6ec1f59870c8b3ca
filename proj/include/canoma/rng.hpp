#pragma once

#include <cstdint>
#include <random>

namespace canoma {

// Uniform doubles built from the top 53 bits of the engine output. The
// standard distributions are implementation-defined, so replay across
// compilers would break if we used them; this mapping is pinned.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

// Open-interval variant for draws fed into log(); never returns 0 or 1.
inline double uniform01_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;  // (0, 1)
}

// splitmix64 finalizer over (base_seed, stream_index): cheap, well-mixed,
// and gives every Monte Carlo instance an independent engine seed.
inline std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t stream_index) {
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace canoma
