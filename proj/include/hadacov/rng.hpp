#pragma once

#include <cstdint>

namespace hadacov {

// 64-bit finalizer mix (SplitMix64). Bijective on uint64, so distinct inputs
// give distinct outputs.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// SplitMix64 counter stream. Bit-stable across platforms and compilers; every
// sampler in the project draws from this, never from std::random distributions.
struct splitmix64 {
    std::uint64_t state;

    explicit splitmix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        return mix64(state);
    }

    // Uniform on (0, 1]: 53-bit mantissa shifted up by one ulp so log() is safe.
    double next_unit() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }
};

enum class matrix_role : std::uint64_t { x = 0, y = 1 };

// Per-matrix stream seed. 2*trial + role + 1 is injective over (trial, role)
// and positive; multiplying by the odd constant is a bijection mod 2^64 and
// mix64 is bijective, so derived seeds are distinct for a fixed master seed.
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed,
                                       std::uint64_t trial_index,
                                       matrix_role role) {
    std::uint64_t lane = 2 * trial_index + static_cast<std::uint64_t>(role) + 1;
    return mix64(master_seed + 0x9E3779B97F4A7C15ULL * lane);
}

}
