#include "aoinet/harness/emulator.hpp"

#include <string>

namespace aoinet::harness {

namespace {

std::uint64_t fnv_bytes(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

SensorEmulator::SensorEmulator(ProfileSpec profile, double jitter, std::uint64_t seed,
                               std::uint16_t source_id)
    : profile_(std::move(profile)),
      jitter_(jitter),
      rng_(seed, "emulator:" + profile_.name + ":" + std::to_string(source_id)),
      next_due_us_(0) {
    next_due_us_ = static_cast<std::uint64_t>(1e6 / profile_.rate_hz);
}

Update SensorEmulator::emit(Timestamp gen_timestamp) {
    Update u;
    u.gen_timestamp = gen_timestamp;
    u.info_type = profile_.info_type;
    u.payload.resize(profile_.size_bytes);
    for (std::size_t i = 8; i < u.payload.size(); ++i) {
        u.payload[i] = static_cast<std::uint8_t>(rng_.below(256));
    }
    const std::uint64_t h =
        fnv_bytes(std::span<const std::uint8_t>(u.payload).subspan(8));
    for (int i = 0; i < 8; ++i) {
        u.payload[i] = static_cast<std::uint8_t>(h >> (56 - 8 * i));
    }
    ++count_;
    const double period_us = 1e6 / profile_.rate_hz;
    const double factor = 1.0 + jitter_ * (2.0 * rng_.uniform() - 1.0);
    next_due_us_ += static_cast<std::uint64_t>(period_us * factor + 0.5);
    return u;
}

bool verify_payload(std::span<const std::uint8_t> payload) {
    if (payload.size() < 8) {
        return false;
    }
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) {
        stored = (stored << 8) | payload[i];
    }
    return stored == fnv_bytes(payload.subspan(8));
}

}  // namespace aoinet::harness
