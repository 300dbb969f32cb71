#pragma once

#include <cstdint>

namespace privopt {

// SplitMix64 (Vigna's public-domain reference constants). Small, fully
// specified, and independent of the standard library's distributions, so a
// 64-bit seed reproduces a run bit-exactly on any platform.
struct SplitMix64 {
    std::uint64_t state = 0;

    SplitMix64() = default;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1): cell midpoints, so neither endpoint is reachable and
    // inverse-CDF transforms stay finite.
    double next_unit_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
};

// Counter-mode stream derivation: stream `index` of a run seeded with `seed`
// gets its own generator state, so streams can be consumed in any order (or
// in parallel) with identical results.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace privopt
