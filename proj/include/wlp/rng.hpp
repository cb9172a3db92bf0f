#pragma once

#include <cstdint>

namespace wlp {

// SplitMix64 (Steele, Lea & Flood; the generator behind Java's
// SplittableRandom). Chosen because streams split cleanly: the simulator
// derives one independent stream per variable index, so growing the sample
// count appends draws without reordering any existing ones.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ULL;
        return mix(state);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

// Independent stream for (seed, stream_index); used per variable.
inline SplitMix64 split_stream(std::uint64_t seed, std::uint64_t stream_index) {
    return SplitMix64(SplitMix64::mix(seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1))));
}

}  // namespace wlp
