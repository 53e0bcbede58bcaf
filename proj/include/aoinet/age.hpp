#pragma once

#include <cstdint>
#include <map>

#include "aoinet/time.hpp"

namespace aoinet {

/// Exact event-driven integrator for one age sample path.
///
/// The path is piecewise linear with slope 1 between fresh deliveries, so the
/// running integral is accumulated as exact trapezoid areas in integer
/// microseconds (twice the area, to stay integral) and only converted to
/// seconds when reported. A tracker starts with a virtual fresh delivery at
/// its start time, so age(start) == 0.
class AgeTracker {
public:
    AgeTracker() : AgeTracker(Timestamp{}) {}
    explicit AgeTracker(Timestamp start, Duration skew_bound = Duration::from_millis(10));

    /// Current age in seconds. Throws std::logic_error if `now` precedes the
    /// last integration point (monotonicity violation).
    double age_at(Timestamp now) const;

    /// Integrate the sawtooth forward to `now` without a delivery.
    void advance_to(Timestamp now);

    /// Process a delivered update generated at `gen`. Advances the integral
    /// to `now` first; a fresher timestamp drops the age to now-gen, a stale
    /// one leaves the path untouched. `gen` ahead of `now` by at most the
    /// skew bound is clamped and counted; beyond it throws std::domain_error.
    void observe_delivery(Timestamp gen, Timestamp now);

    /// Time-average age over [start, horizon]. The tracker must already be
    /// integrated exactly to the horizon (use advance_to).
    double time_average_age(Timestamp horizon) const;

    Timestamp start_time() const { return start_; }
    Timestamp last_fresh_timestamp() const { return last_fresh_; }
    Timestamp last_update_time() const { return last_update_; }
    std::uint64_t delivery_count() const { return delivery_count_; }
    std::uint64_t stale_delivery_count() const { return stale_count_; }
    std::uint64_t skew_clamp_count() const { return skew_clamp_count_; }

private:
    Timestamp start_;
    Timestamp last_fresh_;
    Timestamp last_update_;
    unsigned __int128 integral2_us2_ = 0;  // 2 * integral of age dt, in us^2
    std::uint64_t delivery_count_ = 0;
    std::uint64_t stale_count_ = 0;
    std::uint64_t skew_clamp_count_ = 0;
    Duration skew_bound_;
};

struct NetworkAgeReport {
    std::map<InstanceId, double> per_source_average;  // seconds
    double naoi = 0.0;                                // seconds
    double horizon = 0.0;                             // seconds
};

/// Per-source time averages and their arithmetic mean. All trackers must be
/// integrated to `horizon`. Throws std::domain_error on an empty set.
NetworkAgeReport naoi(const std::map<InstanceId, AgeTracker>& trackers, Timestamp horizon);

}  // namespace aoinet
