#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoinet/time.hpp"

namespace aoinet::sim {

struct InstanceMetrics {
    InstanceId id = 0;
    double avg_age_s = 0.0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;      // complete updates at the destination
    std::uint64_t dropped = 0;        // queue drops + channel-lost + retry-exhausted
    std::uint64_t polls = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t payload_bytes = 0;
    std::uint64_t queue_residual = 0;  // still queued at the horizon
    std::uint64_t pending = 0;         // released but neither delivered nor lost (0 or 1)
};

struct MetricsLog {
    // run identity, echoed into the CSV
    std::string config_hash;
    std::string policy;
    std::string access;
    std::string queue;
    std::uint32_t n_sources = 0;
    double lambda_hz = 0.0;
    std::uint64_t seed = 0;
    double horizon_s = 0.0;

    // results
    double naoi_s = 0.0;
    double throughput_bps = 0.0;
    std::uint64_t deliveries = 0;
    std::uint64_t drops = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t collisions = 0;  // random access only; not part of the CSV schema

    std::vector<InstanceMetrics> per_instance;
};

/// Exact shared CSV schema (column order is part of the contract).
std::string csv_header();
std::string csv_row(const MetricsLog& log);

}  // namespace aoinet::sim
