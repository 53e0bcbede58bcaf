#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoinet/machines.hpp"

namespace aoinet::harness {

enum class Role : std::uint8_t { Destination, Source };

/// Synthetic sensor profile: update size and generation rate.
struct ProfileSpec {
    std::string name;
    std::uint8_t info_type = 0;
    std::uint32_t size_bytes = 0;
    double rate_hz = 0.0;
};

/// gps: 50 B @ 1 Hz, imu: 20 B @ 100 Hz, camera: 19000 B @ 2 Hz.
std::optional<ProfileSpec> profile_by_name(const std::string& name);

struct HarnessConfig {
    Role role = Role::Destination;
    std::string bind = "0.0.0.0:47474";
    std::string peer = "127.0.0.1:47474";
    std::uint16_t source_id = 1;
    std::vector<std::string> profiles = {"gps"};
    double duration_s = 60.0;
    std::uint32_t timeout_ms = 300;
    std::uint32_t sync_exchanges = 8;
    std::uint32_t mtu_payload = 1400;
    double jitter = 0.1;     // fraction of the emulator period
    double resync_s = 0.0;   // 0 = sync only at startup
    Policy policy = Policy::MaxWeight;
    double window_s = 0.5;
    std::uint64_t seed = 1;
    std::string metrics_path;     // empty: metrics to stdout only
    std::string deliveries_path;  // empty: no raw delivery log

    std::vector<std::string> validate() const;
    std::string config_hash() const;  // canonical, excludes seed
};

}  // namespace aoinet::harness
