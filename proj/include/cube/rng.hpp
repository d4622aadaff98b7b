#pragma once

// Counter-based random bits. Every draw is a pure function of
// (seed, stream, counter), so a sample's value does not depend on which
// worker produced it or in which order.

#include <cstdint>

namespace cube {

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

    /// SplitMix64 output at position `counter` of the keyed sequence.
    std::uint64_t bits(std::uint64_t counter) const { return mix(key_ + (counter + 1) * kGamma); }

    /// Uniform double in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [-1, 1).
    double symmetric(std::uint64_t counter) const { return 2.0 * uniform(counter) - 1.0; }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
};

}  // namespace cube
