#include "aoinet/sim/metrics.hpp"

#include <cstdio>

namespace aoinet::sim {

std::string csv_header() {
    return "config_hash,policy,access,queue,n_sources,lambda_hz,seed,horizon_s,naoi_s,"
           "throughput_bps,deliveries,drops,timeouts";
}

std::string csv_row(const MetricsLog& log) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%s,%u,%.9g,%llu,%.9g,%.9g,%.9g,%llu,%llu,%llu",
                  log.config_hash.c_str(), log.policy.c_str(), log.access.c_str(),
                  log.queue.c_str(), log.n_sources, log.lambda_hz,
                  static_cast<unsigned long long>(log.seed), log.horizon_s, log.naoi_s,
                  log.throughput_bps, static_cast<unsigned long long>(log.deliveries),
                  static_cast<unsigned long long>(log.drops),
                  static_cast<unsigned long long>(log.timeouts));
    return std::string(buf);
}

}  // namespace aoinet::sim
