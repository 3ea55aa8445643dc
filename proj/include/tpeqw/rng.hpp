#ifndef TPEQW_RNG_HPP
#define TPEQW_RNG_HPP

#include <cmath>
#include <cstdint>

namespace tpeqw {

/// Counter-based pseudo-random generator with a 64-bit seed.
///
/// Output k is a bijective bit mix of (seed + k * golden), so the stream is
/// a pure function of (seed, counter): the same seed yields the same
/// sequence on every platform, and independent sub-streams can be split off
/// by deriving a new seed. That determinism is part of the public contract
/// of every simulation routine in this library.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix(seed_ + (++counter_) * golden_); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Strictly positive exponential variate with the given rate.
    double exponential(double rate) {
        // midpoint offset keeps the uniform in (0,1), so the variate is > 0
        const double u = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        return -std::log(u) / rate;
    }

    /// Derives an independently seeded generator for a labeled sub-stream.
    CounterRng split(std::uint64_t stream_label) const {
        return CounterRng(mix(seed_ ^ mix(stream_label + golden_)));
    }

  private:
    static constexpr std::uint64_t golden_ = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace tpeqw

#endif // TPEQW_RNG_HPP
