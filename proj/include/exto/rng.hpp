#pragma once

#include <cstdint>

namespace exto {

/// splitmix64 finalizer (Steele, Lea & Flood / Vigna). Used in counter mode:
/// output(i) = mix64(key + i * GAMMA), so any draw is a pure function of
/// (key, counter) and substreams can be handed to threads in any order.
namespace rngdetail {

constexpr std::uint64_t GAMMA = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace rngdetail

/// Counter-based generator: 64-bit splitmix64 in counter mode.
/// substream(seed, r) derives a decorrelated key per replicate, so parallel
/// permutation runs are deterministic regardless of thread count.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static CounterRng substream(std::uint64_t seed, std::uint64_t stream) {
        // Two mixing rounds keep nearby (seed, stream) pairs decorrelated.
        return CounterRng(rngdetail::mix64(
            rngdetail::mix64(seed + 0x632BE59BD9B4E019ULL) +
            stream * rngdetail::GAMMA));
    }

    std::uint64_t next() {
        return rngdetail::mix64(key_ + (counter_++) * rngdetail::GAMMA);
    }

    /// Uniform integer in [0, bound) by Lemire's multiply-shift rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        while (true) {
            const std::uint64_t x = next();
            const unsigned __int128 m =
                static_cast<unsigned __int128>(x) * bound;
            const std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= (0 - bound) % bound)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace exto
