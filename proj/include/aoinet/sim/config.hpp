#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoinet/machines.hpp"
#include "aoinet/time.hpp"

namespace aoinet::sim {

struct TrafficSpec {
    enum class Kind : std::uint8_t { Poisson, Periodic } kind = Kind::Poisson;
    double rate_hz = 100.0;
    std::uint32_t size_bytes = 150;
};

struct SourceSpec {
    std::uint16_t source_id = 0;
    std::uint8_t info_type = 0;
    TrafficSpec traffic;
    double channel_p = 1.0;  // success probability of a data transmission
};

/// Explicit transmission-timing constants standing in for the radio stack:
/// fixed poll and turnaround costs plus size-proportional transmit time.
struct TimingModel {
    std::uint64_t poll_tx_us = 30;
    std::uint64_t turnaround_us = 10;
    double data_rate_bps = 12e6;

    std::uint64_t data_tx_us(std::size_t wire_bytes) const {
        const double us = static_cast<double>(wire_bytes) * 8.0 * 1e6 / data_rate_bps;
        return static_cast<std::uint64_t>(us + 0.999999);  // ceil to whole microseconds
    }
};

enum class AccessMode : std::uint8_t { Polling, RandomAccess };

const char* access_name(AccessMode mode);

/// Slotted contention model: per-slot attempt probability realized either by
/// a fixed probability or by binary exponential backoff (collision or channel
/// failure doubles the window; success resets it; the frame is dropped after
/// max_retries failed attempts). Windows are measured in data-length slots,
/// so the defaults correspond to the usual contention windows rescaled from
/// ~9 us contention slots to ~130 us data slots.
struct RandomAccessParams {
    std::optional<double> fixed_attempt_prob;
    std::uint32_t min_cw = 2;
    std::uint32_t max_cw = 64;
    std::uint32_t max_retries = 7;
};

struct SimConfig {
    std::vector<SourceSpec> sources;
    TimingModel timing;
    AccessMode access = AccessMode::Polling;
    Policy policy = Policy::MaxWeight;
    QueueSpec queue;
    RandomAccessParams random_access;
    Timestamp horizon = Timestamp::from_seconds(10.0);
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> timeout_us;  // derived from the timing model if unset
    double estimator_window_s = 0.5;
    bool poll_loss = false;  // apply channel_p to polls as well as data
    std::uint32_t mtu_payload = 1400;
    std::uint32_t abandon_after_timeouts = 0;

    /// Wire size of the largest frame any source can emit.
    std::size_t max_frame_bytes() const;

    /// Polling response timeout: explicit value, or the full worst-case
    /// exchange plus slack.
    std::uint64_t effective_timeout_us() const;

    /// Empty when valid; otherwise one message per offending field.
    std::vector<std::string> validate() const;

    /// Canonical FNV-1a over everything except the seed, as 16 hex digits.
    std::string config_hash() const;

    /// Mean per-source traffic rate, for reporting.
    double mean_rate_hz() const;

    std::string queue_label() const;
    std::string policy_label() const;
};

/// Convenience builder: n identical sources (ids 1..n), one info type each.
SimConfig uniform_config(std::size_t n_sources, TrafficSpec traffic, double channel_p);

}  // namespace aoinet::sim
