#include "aoinet/harness/config.hpp"

#include <cstdio>

#include "aoinet/sim/rng.hpp"

namespace aoinet::harness {

std::optional<ProfileSpec> profile_by_name(const std::string& name) {
    if (name == "gps") return ProfileSpec{"gps", 0, 50, 1.0};
    if (name == "imu") return ProfileSpec{"imu", 1, 20, 100.0};
    if (name == "camera") return ProfileSpec{"camera", 2, 19000, 2.0};
    return std::nullopt;
}

std::vector<std::string> HarnessConfig::validate() const {
    std::vector<std::string> errors;
    if (duration_s <= 0.0) {
        errors.push_back("duration_s: must be positive");
    }
    if (role == Role::Source && profiles.empty()) {
        errors.push_back("profiles: a source needs at least one profile");
    }
    for (const std::string& p : profiles) {
        if (!profile_by_name(p)) {
            errors.push_back("profiles: unknown profile '" + p + "'");
        }
    }
    if (timeout_ms == 0) {
        errors.push_back("timeout_ms: must be positive");
    }
    if (sync_exchanges == 0) {
        errors.push_back("sync_exchanges: must be positive");
    }
    if (mtu_payload == 0 || mtu_payload > kMaxPayload) {
        errors.push_back("mtu_payload: must be in [1, 65535]");
    }
    if (jitter < 0.0 || jitter >= 1.0) {
        errors.push_back("jitter: must be in [0, 1)");
    }
    if (window_s <= 0.0) {
        errors.push_back("window_s: must be positive");
    }
    return errors;
}

std::string HarnessConfig::config_hash() const {
    std::string canon;
    auto add = [&canon](const std::string& k, const std::string& v) {
        canon += k + "=" + v + ";";
    };
    char buf[32];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    add("role", role == Role::Destination ? "destination" : "source");
    add("bind", bind);
    add("peer", peer);
    add("source_id", std::to_string(source_id));
    for (const std::string& p : profiles) {
        add("profile", p);
    }
    add("duration_s", fmt(duration_s));
    add("timeout_ms", std::to_string(timeout_ms));
    add("sync_exchanges", std::to_string(sync_exchanges));
    add("mtu", std::to_string(mtu_payload));
    add("jitter", fmt(jitter));
    add("resync_s", fmt(resync_s));
    add("policy", policy_name(policy));
    add("window_s", fmt(window_s));
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(sim::fnv1a(canon)));
    return std::string(buf);
}

}  // namespace aoinet::harness
