#pragma once

#include <cstdint>
#include <span>

#include "aoinet/harness/config.hpp"
#include "aoinet/queueing.hpp"
#include "aoinet/sim/rng.hpp"

namespace aoinet::harness {

/// Timer-driven synthetic sensor. Payloads start with an 8-byte FNV-1a of
/// the remaining bytes so the receiver can verify reassembly end to end.
class SensorEmulator {
public:
    SensorEmulator(ProfileSpec profile, double jitter, std::uint64_t seed,
                   std::uint16_t source_id);

    std::uint64_t next_due_us() const { return next_due_us_; }

    /// Build the update due now (stamped with the caller's corrected clock)
    /// and schedule the next one.
    Update emit(Timestamp gen_timestamp);

    const ProfileSpec& profile() const { return profile_; }
    std::uint64_t emitted_count() const { return count_; }

private:
    ProfileSpec profile_;
    double jitter_;
    sim::Stream rng_;
    std::uint64_t next_due_us_;
    std::uint64_t count_ = 0;
};

/// True when the payload carries a valid integrity prefix.
bool verify_payload(std::span<const std::uint8_t> payload);

}  // namespace aoinet::harness
