#pragma once

#include <cstdint>

namespace casched {

// SplitMix64 (Steele/Lea/Flood). Small state, cheap to reseed, good enough
// statistics for preference sampling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Counter-based seed stream: trial i always gets the same seed for a given
// master seed, so a set of trials yields the same result no matter how the
// trials are partitioned across threads.
inline std::uint64_t nth_seed(std::uint64_t master, std::uint64_t i) {
    std::uint64_t z = master + (i + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace casched
