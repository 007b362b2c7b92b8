#pragma once

#include <cstdint>

namespace retroq {

/// SplitMix64 stream generator; passes the reference vector for seed 0
/// (first outputs e220a8397b1dcdaf, 6e789e6aa1b965f4, 06c45d188009454f).
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n) by 128-bit multiply-shift.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }
};

/// Stateless SplitMix64 output function, used to derive stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Per-trial generator: state = mix64(seed) ^ mix64(trial * c1 + c2), so any
/// trial can be replayed without drawing through its predecessors.
/// Draw order inside a trial is fixed: axis choice, then Bob's outcome,
/// then Alice's outcome.
inline SplitMix64 trial_rng(std::uint64_t seed, std::uint64_t trial_index) {
    SplitMix64 g;
    g.state = mix64(seed) ^ mix64(trial_index * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
    return g;
}

}  // namespace retroq
