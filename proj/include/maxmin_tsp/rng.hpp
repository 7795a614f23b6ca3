#pragma once

// Portable seeded randomness.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// The standard distributions are implementation-defined, so bounded integers
// and unit reals are derived here from raw engine output:
//   - uniform_below(bound): Lemire's multiply-shift with rejection (unbiased)
//   - unit_real(): top 53 bits scaled by 2^-53, in [0, 1)
// Per-item seeds come from a SplitMix64 stream rooted at a master seed:
//   derive_seed(master, i) = mix(master + (i + 1) * 0x9E3779B97F4A7C15)

#include <cstdint>
#include <random>

namespace maxmin_tsp {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// The (index+1)-th output of a SplitMix64 generator seeded with `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). `bound` must be positive.
    std::uint64_t uniform_below(std::uint64_t bound) {
        auto product = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    double unit_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace maxmin_tsp
