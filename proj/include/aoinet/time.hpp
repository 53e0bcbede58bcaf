#pragma once

#include <cstdint>
#include <compare>

namespace aoinet {

/// Microseconds since the epoch of the current run. Unsigned 64-bit keeps
/// runs up to ~584k years lossless; all protocol timestamps use this unit.
struct Timestamp {
    std::uint64_t us = 0;

    constexpr auto operator<=>(const Timestamp&) const = default;

    static constexpr Timestamp from_seconds(double s) {
        return Timestamp{static_cast<std::uint64_t>(s * 1e6 + 0.5)};
    }
    constexpr double seconds() const { return static_cast<double>(us) * 1e-6; }
};

/// Signed microsecond interval (timer periods, clock offsets).
struct Duration {
    std::int64_t us = 0;

    constexpr auto operator<=>(const Duration&) const = default;

    static constexpr Duration from_seconds(double s) {
        return Duration{static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5))};
    }
    static constexpr Duration from_millis(std::int64_t ms) { return Duration{ms * 1000}; }
    constexpr double seconds() const { return static_cast<double>(us) * 1e-6; }
};

constexpr Timestamp operator+(Timestamp t, Duration d) {
    return Timestamp{t.us + static_cast<std::uint64_t>(d.us)};
}

constexpr Duration operator-(Timestamp a, Timestamp b) {
    return Duration{static_cast<std::int64_t>(a.us - b.us)};
}

/// One (source_id, info_type) pair packed so that numeric order equals
/// lexicographic (source_id, info_type) order.
using InstanceId = std::uint32_t;

constexpr InstanceId make_instance_id(std::uint16_t source_id, std::uint8_t info_type) {
    return (static_cast<InstanceId>(source_id) << 8) | info_type;
}
constexpr std::uint16_t instance_source(InstanceId id) {
    return static_cast<std::uint16_t>(id >> 8);
}
constexpr std::uint8_t instance_info(InstanceId id) {
    return static_cast<std::uint8_t>(id & 0xff);
}

}  // namespace aoinet
