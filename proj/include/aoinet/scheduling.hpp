#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aoinet/time.hpp"

namespace aoinet {

enum class PollEvent : std::uint8_t { PollSent, DataReceived, EmptyReceived };

/// Destination-side estimate of one instance's state: age, head-of-line
/// system time, and channel reliability over a sliding window.
///
/// Reliability follows the optimistic (D+1)/(P+1) rule over the window, so an
/// instance that has not been polled recently looks attractive again. The
/// head-of-line estimate is refreshed on every reception and held constant in
/// between.
class SourceEstimate {
public:
    SourceEstimate(InstanceId id, Timestamp origin,
                   Duration window = Duration::from_seconds(0.5));

    /// Append a poll/reception event. Events must arrive in nondecreasing
    /// time order; entries older than the window are evicted.
    void record(PollEvent event, Timestamp now);

    /// p-hat = (D+1)/(P+1) over the current window, clamped to (0, 1].
    double reliability(Timestamp now) const;

    /// Complete update received: the age estimate drops to now-gen when the
    /// timestamp is fresher, and the head-of-line estimate collapses onto the
    /// age (the source just emptied its slot, so the potential reduction is
    /// zero until something new arrives there).
    void on_data(Timestamp gen, Timestamp now);

    /// Empty response: the queue over there is empty, so polling again right
    /// now cannot reduce the age.
    void on_empty(Timestamp now);

    /// Mid-stream fragment: the in-flight update's system time is known
    /// exactly (now - gen), but the age itself only drops on completion.
    void on_fragment(Timestamp gen, Timestamp now);

    /// Age estimate at `now` in seconds.
    double age(Timestamp now) const;

    /// Head-of-line system-time estimate in seconds, constant since the last
    /// reception.
    double hol() const;

    InstanceId id() const { return id_; }

    /// (polls sent, data+empty received) inside the window ending at `now`.
    /// Queries must not move backwards in time: eviction is lazy and
    /// irreversible.
    std::pair<std::uint64_t, std::uint64_t> window_counts(Timestamp now) const;

private:
    void evict(Timestamp now) const;

    InstanceId id_;
    Timestamp freshest_gen_;
    double hol_s_ = 0.0;
    Duration window_;
    mutable std::deque<std::pair<Timestamp, PollEvent>> log_;
    mutable std::uint64_t polls_in_window_ = 0;
    mutable std::uint64_t rx_in_window_ = 0;
};

struct PollDecision {
    InstanceId chosen = 0;
    std::vector<std::pair<InstanceId, double>> index_values;
};

/// Max-Weight index p * (age - hol)^2. A negative gap (possible under clock
/// skew clamping) contributes zero and bumps the inconsistency counter.
double mw_index(double reliability, double age_s, double hol_s,
                std::uint64_t* inconsistency_count = nullptr);

/// Poll the instance with the highest Max-Weight index; ties resolve to the
/// least (source_id, info_type). The span must be sorted by id. Throws
/// std::domain_error on an empty set.
PollDecision mw_select(std::span<const SourceEstimate* const> estimates, Timestamp now,
                       std::uint64_t* inconsistency_count = nullptr);
PollDecision mw_select(const std::map<InstanceId, SourceEstimate>& estimates, Timestamp now,
                       std::uint64_t* inconsistency_count = nullptr);

/// Poll the instance with the highest age, ignoring reliability and
/// head-of-line state. Same tie-break.
PollDecision maf_select(std::span<const SourceEstimate* const> estimates, Timestamp now);
PollDecision maf_select(const std::map<InstanceId, SourceEstimate>& estimates, Timestamp now);

/// Cycle through instances in id order, starting after `last`.
PollDecision rr_select(const std::map<InstanceId, SourceEstimate>& estimates,
                       std::optional<InstanceId> last);

}  // namespace aoinet
