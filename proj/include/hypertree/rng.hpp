// Copyright 2026 The hypertree-lab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HYPERTREE_RNG_HPP_
#define HYPERTREE_RNG_HPP_

#include <cstdint>

namespace hypertree {

// Finalizing mixer of the SplitMix64 generator (Steele, Lea & Flood).
// Bijective on 64-bit words with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based 64-bit generator: the i-th output is a pure function of
// (seed, i), so streams are reproducible across platforms and thread
// schedules. Outputs are the SplitMix64 sequence for the given seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Derives the per-sample seed from (master_seed, n, sample_index). Each
// field is folded in through the mixer with a distinct odd constant so that
// distinct triples give independent-looking streams; workers can therefore
// process samples in any order or count without changing any stream.
inline std::uint64_t derive_seed(std::uint64_t master_seed, int n, std::uint64_t sample_index) {
    std::uint64_t h = mix64(master_seed ^ 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (static_cast<std::uint64_t>(n) * 0xC2B2AE3D27D4EB4FULL));
    h = mix64(h ^ (sample_index * 0x165667B19E3779F9ULL));
    return h;
}

}  // namespace hypertree

#endif  // HYPERTREE_RNG_HPP_
