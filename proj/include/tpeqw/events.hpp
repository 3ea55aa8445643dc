#ifndef TPEQW_EVENTS_HPP
#define TPEQW_EVENTS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "tpeqw/errors.hpp"
#include "tpeqw/rng.hpp"

namespace tpeqw {

/// Which frequency the sigma+ (right-circular) arm carries for a given
/// pair; the sigma- arm carries the other one. Both assignments occur with
/// equal amplitude in the energy-entangled state.
enum class ArmAssignment : int {
    sigma_plus_idler = 0,
    sigma_plus_signal = 1,
};

/// A simulated stream of pair-emission events.
struct EventTrace {
    std::vector<double> timestamps_s; // strictly increasing, within [0, duration)
    std::vector<ArmAssignment> arm_tags;
    double duration_s = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return timestamps_s.size(); }
};

/// Homogeneous Poisson emission process: exponential inter-arrival times
/// with mean 1/R and a 50/50 arm assignment per pair. Same seed, same trace,
/// byte for byte.
inline EventTrace simulate_events(double rate_per_s, double duration_s, std::uint64_t seed) {
    if (!(rate_per_s > 0.0)) throw domain_error("simulate_events: rate must be > 0");
    if (!(duration_s > 0.0)) throw domain_error("simulate_events: duration must be > 0");
    const double expected = rate_per_s * duration_s;
    if (expected > 1e9) {
        throw resource_error("simulate_events: expected event count exceeds 1e9");
    }

    EventTrace trace;
    trace.duration_s = duration_s;
    trace.seed = seed;
    trace.timestamps_s.reserve(static_cast<std::size_t>(expected * 1.05) + 16);
    trace.arm_tags.reserve(trace.timestamps_s.capacity());

    CounterRng rng(seed);
    double t = 0.0;
    for (;;) {
        double next = t + rng.exponential(rate_per_s);
        if (next <= t) next = std::nextafter(t, duration_s); // rounding guard
        if (next >= duration_s) break;
        t = next;
        trace.timestamps_s.push_back(t);
        trace.arm_tags.push_back((rng.next_u64() & 1u) ? ArmAssignment::sigma_plus_signal
                                                       : ArmAssignment::sigma_plus_idler);
    }
    return trace;
}

/// Fraction of events whose successor arrives within the given window.
/// Matches 1 - exp(-R window) for a Poisson stream.
inline double overlap_fraction(const EventTrace& trace, double window_s) {
    if (!(window_s >= 0.0)) throw domain_error("overlap_fraction: window must be >= 0");
    const std::size_t n = trace.size();
    if (n < 2) return 0.0;
    std::size_t hits = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (trace.timestamps_s[k + 1] - trace.timestamps_s[k] < window_s) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n - 1);
}

} // namespace tpeqw

#endif // TPEQW_EVENTS_HPP
