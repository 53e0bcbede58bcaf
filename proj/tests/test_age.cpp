#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aoinet/age.hpp"
#include "aoinet/sim/rng.hpp"
#include "doctest.h"

using namespace aoinet;

namespace {

Timestamp sec(double s) { return Timestamp::from_seconds(s); }

// Independent piecewise-linear oracle: exact doubled area in us^2 over
// [0, horizon] for a delivery schedule of (gen, at) pairs, slope-1 growth
// from a virtual fresh delivery at 0.
unsigned __int128 oracle_area2(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& sched,
                               std::uint64_t horizon_us) {
    unsigned __int128 area2 = 0;
    std::uint64_t fresh = 0;
    std::uint64_t prev = 0;
    for (const auto& [gen, at] : sched) {
        const std::uint64_t a0 = prev - fresh;
        const std::uint64_t a1 = at - fresh;
        area2 += static_cast<unsigned __int128>(a0 + a1) * (at - prev);
        prev = at;
        fresh = std::max(fresh, gen);
    }
    const std::uint64_t a0 = prev - fresh;
    const std::uint64_t a1 = horizon_us - fresh;
    area2 += static_cast<unsigned __int128>(a0 + a1) * (horizon_us - prev);
    return area2;
}

}  // namespace

TEST_CASE("age grows linearly from the virtual initial delivery") {
    AgeTracker t;
    CHECK(t.age_at(sec(5.0)) == doctest::Approx(5.0));
    CHECK(t.age_at(Timestamp{0}) == 0.0);
}

TEST_CASE("delivery drops age to the packet delay") {
    AgeTracker t;
    t.observe_delivery(sec(4.0), sec(5.0));
    CHECK(t.age_at(sec(5.0)) == doctest::Approx(1.0));
    CHECK(t.delivery_count() == 1);

    SUBCASE("stale delivery leaves the path unchanged") {
        t.observe_delivery(sec(3.0), sec(6.0));
        CHECK(t.age_at(sec(6.0)) == doctest::Approx(2.0));
        CHECK(t.delivery_count() == 1);
        CHECK(t.stale_delivery_count() == 1);
    }
    SUBCASE("zero-delay delivery zeroes the age") {
        t.observe_delivery(sec(6.0), sec(6.0));
        CHECK(t.age_at(sec(6.0)) == 0.0);
    }
}

TEST_CASE("age queries before the last integration point are rejected") {
    AgeTracker t;
    t.advance_to(sec(2.0));
    CHECK_THROWS_AS(t.age_at(sec(1.0)), std::logic_error);
    CHECK_THROWS_AS(t.advance_to(sec(1.0)), std::logic_error);
}

TEST_CASE("future timestamps: clamped inside the skew bound, rejected beyond") {
    AgeTracker t;
    t.observe_delivery(sec(1.0) + Duration::from_millis(5), sec(1.0));
    CHECK(t.skew_clamp_count() == 1);
    CHECK(t.age_at(sec(1.0)) == 0.0);
    CHECK_THROWS_AS(t.observe_delivery(sec(2.0) + Duration::from_millis(11), sec(2.0)),
                    std::domain_error);
}

TEST_CASE("time averages of hand-built schedules") {
    SUBCASE("no deliveries over T=4 is a triangle") {
        AgeTracker t;
        t.advance_to(sec(4.0));
        CHECK(t.time_average_age(sec(4.0)) == doctest::Approx(2.0));
    }
    SUBCASE("one delivery at t=2 of a packet generated at t=1") {
        AgeTracker t;
        t.observe_delivery(sec(1.0), sec(2.0));
        t.advance_to(sec(4.0));
        CHECK(t.time_average_age(sec(4.0)) == doctest::Approx(1.5));
    }
    SUBCASE("zero-delay deliveries every second give a half-second average") {
        AgeTracker t;
        for (int i = 1; i <= 10; ++i) {
            t.observe_delivery(sec(i), sec(i));
        }
        CHECK(t.time_average_age(sec(10.0)) == doctest::Approx(0.5));
    }
    SUBCASE("horizon validation") {
        AgeTracker t;
        CHECK_THROWS_AS(t.time_average_age(Timestamp{0}), std::domain_error);
        t.advance_to(sec(1.0));
        CHECK_THROWS_AS(t.time_average_age(sec(2.0)), std::logic_error);
    }
}

TEST_CASE("sawtooth is affine with slope one between deliveries") {
    AgeTracker t;
    t.observe_delivery(sec(0.7), sec(1.0));
    const double base = t.age_at(sec(1.0));
    for (int i = 1; i <= 20; ++i) {
        const double dt = 0.05 * i;
        CHECK(t.age_at(sec(1.0 + dt)) == doctest::Approx(base + dt).epsilon(1e-12));
    }
}

TEST_CASE("stale-delivery invariance: non-increasing timestamps never change the path") {
    sim::Stream rng(7, "stale-invariance");
    for (int trial = 0; trial < 200; ++trial) {
        AgeTracker plain;
        AgeTracker noisy;
        std::uint64_t now = 0;
        std::uint64_t best_gen = 0;
        for (int k = 0; k < 40; ++k) {
            now += 1 + rng.below(100000);
            const std::uint64_t gen = now - rng.below(50000) % (now + 1);
            plain.observe_delivery(Timestamp{gen}, Timestamp{now});
            noisy.observe_delivery(Timestamp{gen}, Timestamp{now});
            best_gen = std::max(best_gen, gen);
            if (rng.bernoulli(0.6) && best_gen > 0) {
                // interleave a delivery that cannot be fresher than the best
                now += rng.below(1000);
                noisy.observe_delivery(Timestamp{rng.below(best_gen + 1)}, Timestamp{now});
                plain.advance_to(Timestamp{now});
            }
        }
        const Timestamp horizon{now + 1000};
        plain.advance_to(horizon);
        noisy.advance_to(horizon);
        CHECK(plain.time_average_age(horizon) == noisy.time_average_age(horizon));
        CHECK(plain.last_fresh_timestamp() == noisy.last_fresh_timestamp());
    }
}

TEST_CASE("integral additivity over a split horizon") {
    sim::Stream rng(11, "additivity");
    for (int trial = 0; trial < 100; ++trial) {
        AgeTracker full;
        AgeTracker head;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> sched;
        std::uint64_t now = 0;
        for (int k = 0; k < 30; ++k) {
            now += 1 + rng.below(200000);
            sched.emplace_back(now - rng.below(100000) % (now + 1), now);
        }
        const std::uint64_t split = now + 1 + rng.below(100000);
        const std::uint64_t horizon = split + 1 + rng.below(400000);
        for (const auto& [gen, at] : sched) {
            full.observe_delivery(Timestamp{gen}, Timestamp{at});
        }
        AgeTracker tail = full;  // value semantics: snapshot before the split
        head = full;
        head.advance_to(Timestamp{split});
        full.advance_to(Timestamp{horizon});
        tail.advance_to(Timestamp{split});
        const double head_avg = head.time_average_age(Timestamp{split});
        const double full_avg = full.time_average_age(Timestamp{horizon});
        const double w1 = Timestamp{split}.seconds();
        const double w2 = Timestamp{horizon}.seconds() - w1;
        // average over the tail via the full and head integrals
        const double tail_avg = (full_avg * (w1 + w2) - head_avg * w1) / w2;
        const double recombined = (head_avg * w1 + tail_avg * w2) / (w1 + w2);
        CHECK(recombined == doctest::Approx(full_avg).epsilon(1e-9));
    }
}

TEST_CASE("exactness against the independent piecewise oracle") {
    sim::Stream rng(13, "exactness");
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> sched;
        std::uint64_t now = 0;
        for (int k = 0; k < 50; ++k) {
            now += 1 + rng.below(1u << 20);
            sched.emplace_back(now > 500 ? now - rng.below(500) : 0, now);
        }
        const std::uint64_t horizon = now + 1 + rng.below(1u << 20);
        AgeTracker t;
        for (const auto& [gen, at] : sched) {
            t.observe_delivery(Timestamp{gen}, Timestamp{at});
        }
        t.advance_to(Timestamp{horizon});
        const double expect =
            static_cast<double>(oracle_area2(sched, horizon)) * 0.5e-12 / (horizon * 1e-6);
        CHECK(t.time_average_age(Timestamp{horizon}) ==
              doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("network report averages per-source means") {
    std::map<InstanceId, AgeTracker> trackers;
    AgeTracker a;  // no deliveries: avg 2.0 over T=4
    a.advance_to(sec(4.0));
    AgeTracker b;
    for (int i = 1; i <= 4; ++i) {
        b.observe_delivery(sec(i), sec(i));  // avg 0.5
    }
    trackers.emplace(1, a);
    trackers.emplace(2, b);
    const NetworkAgeReport report = naoi(trackers, sec(4.0));
    CHECK(report.naoi == doctest::Approx(1.25));
    CHECK(report.per_source_average.at(1) == doctest::Approx(2.0));
    CHECK(report.per_source_average.at(2) == doctest::Approx(0.5));

    SUBCASE("single source equals its own average") {
        std::map<InstanceId, AgeTracker> one{{7, a}};
        CHECK(naoi(one, sec(4.0)).naoi == doctest::Approx(2.0));
    }
    SUBCASE("empty set is a domain error") {
        std::map<InstanceId, AgeTracker> none;
        CHECK_THROWS_AS(naoi(none, sec(4.0)), std::domain_error);
    }
}

TEST_CASE("ten i.i.d. sources: network average within 3 sigma of the single-source mean") {
    // Zero-delay deliveries at unit-rate Poisson instants: expected
    // time-average age is 1.0. Estimate the single-source spread over seeds,
    // then check a 10-source network mean against it.
    const double horizon_s = 200.0;
    auto run_source = [&](std::uint64_t seed, const char* name) {
        sim::Stream rng(seed, name);
        AgeTracker t;
        double now = 0.0;
        while (true) {
            now += rng.exponential(1.0);
            if (now >= horizon_s) break;
            t.observe_delivery(sec(now), sec(now));
        }
        t.advance_to(sec(horizon_s));
        return t;
    };
    std::vector<double> singles;
    for (std::uint64_t s = 0; s < 30; ++s) {
        singles.push_back(run_source(s, "mc-single").time_average_age(sec(horizon_s)));
    }
    double mean = 0.0;
    for (double v : singles) mean += v;
    mean /= static_cast<double>(singles.size());
    double var = 0.0;
    for (double v : singles) var += (v - mean) * (v - mean);
    const double sigma_single = std::sqrt(var / (singles.size() - 1));

    std::map<InstanceId, AgeTracker> net;
    for (std::uint64_t i = 0; i < 10; ++i) {
        net.emplace(static_cast<InstanceId>(i), run_source(i + 100, "mc-net"));
    }
    const double network = naoi(net, sec(horizon_s)).naoi;
    const double sigma_network = sigma_single / std::sqrt(10.0);
    CHECK(std::abs(network - mean) <= 3.0 * sigma_network);
}
