#pragma once

#include <cstdint>

namespace plad {

// Counter-based 64-bit generator: draw i of stream `seed` is
//
//     out_i = mix64(seed + i * 0x9E3779B97F4A7C15)     (i = 1, 2, ...)
//
// where mix64 is the SplitMix64 finalizer. Stateless apart from the counter,
// so sequences are reproducible across platforms and easy to re-implement in
// other languages. Uniform doubles take the top 53 bits.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix64(seed + (++counter) * kGamma); }

    // in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // inclusive on both ends
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

}  // namespace plad
