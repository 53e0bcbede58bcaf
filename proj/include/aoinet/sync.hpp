#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "aoinet/time.hpp"

namespace aoinet {

/// One four-timestamp exchange result. Offset is remote-minus-local; a
/// half-microsecond offset is representable exactly, so it stays a double.
struct ClockOffset {
    double offset_us = 0.0;
    std::int64_t delay_us = 0;

    double offset_seconds() const { return offset_us * 1e-6; }
    double delay_seconds() const { return static_cast<double>(delay_us) * 1e-6; }
};

/// Estimate the remote-minus-local clock offset from the four-timestamp
/// exchange: T1 local transmit, T2 remote receive, T3 remote transmit, T4
/// local receive. offset = ((T2-T1)+(T3-T4))/2, delay = (T4-T1)-(T3-T2).
/// Throws std::invalid_argument when T4 < T1 or the round-trip delay is
/// negative (inconsistent exchange).
inline ClockOffset sync_offset(Timestamp t1, Timestamp t2, Timestamp t3, Timestamp t4) {
    if (t4 < t1) {
        throw std::invalid_argument("sync_offset: reply received before the request was sent");
    }
    const std::int64_t forward = static_cast<std::int64_t>(t2.us) - static_cast<std::int64_t>(t1.us);
    const std::int64_t backward = static_cast<std::int64_t>(t3.us) - static_cast<std::int64_t>(t4.us);
    const std::int64_t delay = static_cast<std::int64_t>(t4.us - t1.us) -
                               (static_cast<std::int64_t>(t3.us) - static_cast<std::int64_t>(t2.us));
    if (delay < 0) {
        throw std::invalid_argument("sync_offset: negative round-trip delay");
    }
    return ClockOffset{(static_cast<double>(forward) + static_cast<double>(backward)) / 2.0, delay};
}

/// Adopts the offset of the minimum-delay exchange out of a burst.
class OffsetEstimator {
public:
    void add(const ClockOffset& sample) {
        if (!best_ || sample.delay_us < best_->delay_us) {
            best_ = sample;
        }
        ++samples_;
    }

    std::optional<ClockOffset> best() const { return best_; }
    std::size_t sample_count() const { return samples_; }

private:
    std::optional<ClockOffset> best_;
    std::size_t samples_ = 0;
};

}  // namespace aoinet
