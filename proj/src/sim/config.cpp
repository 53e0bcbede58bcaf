#include "aoinet/sim/config.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "aoinet/sim/rng.hpp"
#include "aoinet/wire.hpp"

namespace aoinet::sim {

const char* access_name(AccessMode mode) {
    return mode == AccessMode::Polling ? "polling" : "random";
}

std::size_t SimConfig::max_frame_bytes() const {
    std::size_t max_update = 0;
    for (const SourceSpec& s : sources) {
        max_update = std::max<std::size_t>(max_update, s.traffic.size_bytes);
    }
    return kHeaderSize + std::min<std::size_t>(max_update, mtu_payload);
}

std::uint64_t SimConfig::effective_timeout_us() const {
    if (timeout_us) {
        return *timeout_us;
    }
    return timing.poll_tx_us + timing.turnaround_us + timing.data_tx_us(max_frame_bytes()) + 100;
}

std::vector<std::string> SimConfig::validate() const {
    std::vector<std::string> errors;
    if (sources.empty()) {
        errors.push_back("sources: at least one source is required");
    }
    std::set<InstanceId> ids;
    for (const SourceSpec& s : sources) {
        if (!ids.insert(make_instance_id(s.source_id, s.info_type)).second) {
            errors.push_back("sources: duplicate (source_id, info_type) instance");
        }
        if (s.traffic.rate_hz <= 0.0) {
            errors.push_back("traffic.rate_hz: must be positive");
        }
        if (s.traffic.size_bytes == 0) {
            errors.push_back("traffic.size_bytes: must be positive");
        }
        if (s.channel_p <= 0.0 || s.channel_p > 1.0) {
            errors.push_back("channel.p: must be in (0, 1]");
        }
    }
    if (horizon.us == 0) {
        errors.push_back("horizon: must be positive");
    }
    if (timing.poll_tx_us == 0 || timing.turnaround_us == 0) {
        errors.push_back("timing: durations must be positive");
    }
    if (timing.data_rate_bps <= 0.0) {
        errors.push_back("timing.data_rate_bps: must be positive");
    }
    if (mtu_payload == 0 || mtu_payload > kMaxPayload) {
        errors.push_back("mtu_payload: must be in [1, 65535]");
    }
    if (estimator_window_s <= 0.0) {
        errors.push_back("estimator_window_s: must be positive");
    }
    if (access == AccessMode::Polling && timeout_us) {
        const std::uint64_t exchange =
            timing.poll_tx_us + timing.turnaround_us + timing.data_tx_us(max_frame_bytes());
        if (*timeout_us < exchange) {
            errors.push_back("timeout_us: below the worst-case exchange time (" +
                             std::to_string(exchange) + " us); responses would always be late");
        }
    }
    if (random_access.fixed_attempt_prob &&
        (*random_access.fixed_attempt_prob <= 0.0 || *random_access.fixed_attempt_prob > 1.0)) {
        errors.push_back("random_access.fixed_attempt_prob: must be in (0, 1]");
    }
    if (random_access.min_cw == 0 || random_access.max_cw < random_access.min_cw) {
        errors.push_back("random_access: need 0 < min_cw <= max_cw");
    }
    return errors;
}

std::string SimConfig::queue_label() const {
    if (queue.kind == QueueSpec::Kind::Lcfs1) {
        return "lcfs1";
    }
    return "fcfs-" + std::to_string(queue.fcfs_capacity) +
           (queue.fcfs_drop == DropPolicy::TailDrop ? "-tail" : "-head");
}

std::string SimConfig::policy_label() const {
    return access == AccessMode::Polling ? policy_name(policy) : "none";
}

double SimConfig::mean_rate_hz() const {
    if (sources.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const SourceSpec& s : sources) {
        sum += s.traffic.rate_hz;
    }
    return sum / static_cast<double>(sources.size());
}

std::string SimConfig::config_hash() const {
    std::string canon;
    canon.reserve(256);
    auto add = [&canon](const std::string& k, const std::string& v) {
        canon += k;
        canon += '=';
        canon += v;
        canon += ';';
    };
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    add("access", access_name(access));
    add("policy", policy_label());
    add("queue", queue_label());
    add("horizon_us", std::to_string(horizon.us));
    add("timeout_us", std::to_string(effective_timeout_us()));
    add("window_s", fmt(estimator_window_s));
    add("poll_loss", poll_loss ? "1" : "0");
    add("mtu", std::to_string(mtu_payload));
    add("abandon", std::to_string(abandon_after_timeouts));
    add("timing", std::to_string(timing.poll_tx_us) + "," + std::to_string(timing.turnaround_us) +
                      "," + fmt(timing.data_rate_bps));
    add("ra", (random_access.fixed_attempt_prob ? fmt(*random_access.fixed_attempt_prob) : "-") +
                  "," + std::to_string(random_access.min_cw) + "," +
                  std::to_string(random_access.max_cw) + "," +
                  std::to_string(random_access.max_retries));
    for (const SourceSpec& s : sources) {
        add("src", std::to_string(s.source_id) + "/" + std::to_string(s.info_type) + "," +
                       (s.traffic.kind == TrafficSpec::Kind::Poisson ? "poisson" : "periodic") +
                       "," + fmt(s.traffic.rate_hz) + "," + std::to_string(s.traffic.size_bytes) +
                       "," + fmt(s.channel_p));
    }
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canon)));
    return std::string(buf);
}

SimConfig uniform_config(std::size_t n_sources, TrafficSpec traffic, double channel_p) {
    SimConfig cfg;
    cfg.sources.reserve(n_sources);
    for (std::size_t i = 0; i < n_sources; ++i) {
        SourceSpec s;
        s.source_id = static_cast<std::uint16_t>(i + 1);
        s.info_type = 0;
        s.traffic = traffic;
        s.channel_p = channel_p;
        cfg.sources.push_back(s);
    }
    return cfg;
}

}  // namespace aoinet::sim
