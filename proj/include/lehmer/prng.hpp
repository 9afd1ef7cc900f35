// Deterministic seeded PRNG for reproducible property suites.
#pragma once

#include <cstdint>

namespace lehmer {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi], inclusive, by rejection; independent of platform RNG.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t span = hi - lo + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t r;
        do { r = next(); } while (r >= limit);
        return lo + r % span;
    }
};

}  // namespace lehmer
