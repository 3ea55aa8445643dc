#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tpeqw/events.hpp"
#include "test_helpers.hpp"

using namespace tpeqw;
using tpeqw_test::rel_diff;

TEST_CASE("trace determinism") {
    const EventTrace a = simulate_events(1e6, 1e-2, 1234);
    const EventTrace b = simulate_events(1e6, 1e-2, 1234);
    REQUIRE(a.timestamps_s == b.timestamps_s);
    REQUIRE(a.arm_tags == b.arm_tags);

    const EventTrace c = simulate_events(1e6, 1e-2, 1235);
    REQUIRE(a.timestamps_s != c.timestamps_s);
}

TEST_CASE("timestamps are strictly increasing inside the window") {
    const EventTrace t = simulate_events(5e5, 2e-2, 99);
    REQUIRE(t.size() > 100);
    REQUIRE(t.timestamps_s.front() >= 0.0);
    REQUIRE(t.timestamps_s.back() < t.duration_s);
    for (std::size_t k = 1; k < t.size(); ++k) {
        REQUIRE(t.timestamps_s[k] > t.timestamps_s[k - 1]);
    }
    REQUIRE(t.arm_tags.size() == t.timestamps_s.size());
}

TEST_CASE("event count matches the Poisson mean over many seeds") {
    const double rate = 1e6;
    const double duration = 1e-3; // lambda = 1000 per trace
    const int n_seeds = 200;
    double total = 0.0;
    for (int seed = 1; seed <= n_seeds; ++seed) {
        total += static_cast<double>(simulate_events(rate, duration, seed).size());
    }
    const double mean = total / n_seeds;
    const double standard_error = std::sqrt(rate * duration / n_seeds);
    REQUIRE(std::abs(mean - rate * duration) < 3.0 * standard_error);
}

TEST_CASE("overlap fraction reproduces the analytic law") {
    // operating point: R = 7.5e10, tau_cav = 2.4 ps, ~1e6 events
    const double rate = 7.5e10;
    const double tau = 2.4e-12;
    const double duration = 1e6 / rate;
    const EventTrace t = simulate_events(rate, duration, 2024);
    const double expected = -std::expm1(-rate * tau); // 0.1647...
    const double observed = overlap_fraction(t, tau);
    const double sigma =
        std::sqrt(expected * (1.0 - expected) / static_cast<double>(t.size() - 1));
    REQUIRE(std::abs(observed - expected) < 3.0 * sigma);
}

TEST_CASE("inter-arrival times pass a KS test against the exponential law") {
    const double rate = 2e5;
    const EventTrace t = simulate_events(rate, 5.0, 77); // ~1e6 events
    std::vector<double> gaps;
    gaps.reserve(t.size());
    for (std::size_t k = 1; k < t.size(); ++k) {
        gaps.push_back(t.timestamps_s[k] - t.timestamps_s[k - 1]);
    }
    std::sort(gaps.begin(), gaps.end());
    const double n = static_cast<double>(gaps.size());
    double d = 0.0;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        const double cdf = -std::expm1(-rate * gaps[k]);
        const double lo = static_cast<double>(k) / n;
        const double hi = static_cast<double>(k + 1) / n;
        d = std::max(d, std::max(std::abs(cdf - lo), std::abs(hi - cdf)));
    }
    // alpha = 1% critical value for large n
    REQUIRE(d < 1.628 / std::sqrt(n));
}

TEST_CASE("arm tags are an unbiased coin") {
    const EventTrace t = simulate_events(1e6, 1e-1, 5); // ~1e5 events
    std::size_t plus_signal = 0;
    for (const auto tag : t.arm_tags) {
        if (tag == ArmAssignment::sigma_plus_signal) ++plus_signal;
    }
    const double n = static_cast<double>(t.size());
    const double sigma = std::sqrt(0.25 * n);
    REQUIRE(std::abs(static_cast<double>(plus_signal) - 0.5 * n) < 3.0 * sigma);
}

TEST_CASE("input validation and resource limits") {
    REQUIRE_THROWS_AS(simulate_events(0.0, 1.0, 1), domain_error);
    REQUIRE_THROWS_AS(simulate_events(1e6, 0.0, 1), domain_error);
    REQUIRE_THROWS_AS(simulate_events(1e9, 10.0, 1), resource_error);
    REQUIRE_THROWS_AS(overlap_fraction(EventTrace{}, -1.0), domain_error);
    REQUIRE(overlap_fraction(EventTrace{}, 1.0) == 0.0);
}
