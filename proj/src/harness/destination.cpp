#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "aoinet/harness/emulator.hpp"
#include "aoinet/harness/runner.hpp"
#include "aoinet/harness/socket.hpp"
#include "aoinet/machines.hpp"
#include "aoinet/sim/metrics.hpp"
#include "aoinet/wire.hpp"

namespace aoinet::harness {

namespace {

sim::MetricsLog snapshot(const HarnessConfig& cfg, const DestinationMachine& dest,
                         Timestamp now, std::uint64_t payload_bytes, std::uint64_t deliveries,
                         std::uint64_t drops) {
    sim::MetricsLog log;
    log.config_hash = cfg.config_hash();
    log.policy = policy_name(cfg.policy);
    log.access = "udp";
    log.queue = "lcfs1";
    log.n_sources = static_cast<std::uint32_t>(dest.instance_count());
    log.lambda_hz = 0.0;  // generation rates live at the sources
    log.seed = cfg.seed;
    log.horizon_s = now.seconds();
    if (dest.instance_count() > 0 && now.us > 0) {
        log.naoi_s = dest.report_at(now).naoi;
        log.throughput_bps = static_cast<double>(payload_bytes) * 8.0 / now.seconds();
    }
    log.deliveries = deliveries;
    log.drops = drops;
    log.timeouts = dest.timeout_count();
    return log;
}

}  // namespace

int run_destination(const HarnessConfig& cfg) {
    const auto errors = cfg.validate();
    if (!errors.empty()) {
        for (const auto& e : errors) {
            std::fprintf(stderr, "config error: %s\n", e.c_str());
        }
        return 2;
    }

    UdpSocket sock;
    Endpoint local;
    try {
        local = parse_endpoint(cfg.bind);
        sock.bind(local);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "destination: %s\n", e.what());
        return 3;
    }

    DestinationMachine::Config dcfg;
    dcfg.policy = cfg.policy;
    dcfg.estimator_window = Duration::from_seconds(cfg.window_s);
    DestinationMachine dest(dcfg);

    std::ofstream metrics;
    if (!cfg.metrics_path.empty()) {
        metrics.open(cfg.metrics_path);
        if (!metrics) {
            std::fprintf(stderr, "destination: cannot open %s\n", cfg.metrics_path.c_str());
            return 3;
        }
    }
    std::ostream& metrics_out = metrics.is_open() ? static_cast<std::ostream&>(metrics)
                                                  : static_cast<std::ostream&>(std::cout);
    metrics_out << sim::csv_header() << "\n";

    std::ofstream deliveries_log;
    if (!cfg.deliveries_path.empty()) {
        deliveries_log.open(cfg.deliveries_path);
        if (!deliveries_log) {
            std::fprintf(stderr, "destination: cannot open %s\n", cfg.deliveries_path.c_str());
            return 3;
        }
        deliveries_log << "instance_id,gen_us,recv_us\n";
    }

    std::map<InstanceId, Endpoint> peers;
    const std::uint64_t end_us = static_cast<std::uint64_t>(cfg.duration_s * 1e6);
    const std::uint64_t timeout_us = static_cast<std::uint64_t>(cfg.timeout_ms) * 1000;
    std::optional<std::uint64_t> poll_deadline;
    std::uint64_t next_metrics_us = 1000000;

    std::uint64_t payload_bytes = 0;
    std::uint64_t deliveries = 0;
    std::uint64_t corrupt = 0;
    std::uint64_t decode_errors = 0;
    std::uint64_t unroutable_polls = 0;
    std::uint64_t timer_fires = 0;
    std::uint64_t timer_late_max_us = 0;
    std::uint64_t timer_late_sum_us = 0;

    auto send_poll = [&](const std::optional<Packet>& poll, std::uint64_t now) {
        if (!poll) {
            return;
        }
        auto it = peers.find(poll->instance());
        if (it == peers.end()) {
            ++unroutable_polls;  // pre-registered instance that never spoke
            poll_deadline = now + timeout_us;
            return;
        }
        sock.send_to(encode(*poll), it->second);
        poll_deadline = now + timeout_us;
    };

    auto handle_delivery = [&](const std::vector<CompletedUpdate>& updates) {
        for (const CompletedUpdate& u : updates) {
            ++deliveries;
            payload_bytes += u.payload.size();
            if (!verify_payload(u.payload)) {
                ++corrupt;
            }
            if (deliveries_log.is_open()) {
                deliveries_log << u.instance << "," << u.gen_timestamp.us << ","
                               << dest.tracker(u.instance).last_update_time().us << "\n";
            }
        }
    };

    while (true) {
        const std::uint64_t now = mono_now_us();
        if (now >= end_us) {
            break;
        }
        std::uint64_t wake = std::min(end_us, next_metrics_us);
        if (poll_deadline) {
            wake = std::min(wake, *poll_deadline);
        }
        const int wait_ms = now >= wake ? 0 : static_cast<int>((wake - now + 999) / 1000);

        auto datagram = sock.receive(wait_ms);
        const std::uint64_t t = mono_now_us();

        if (datagram) {
            const auto& [bytes, from] = *datagram;
            Packet pkt;
            try {
                pkt = decode(bytes);
            } catch (const WireError& e) {
                ++decode_errors;
                std::fprintf(stderr, "destination: decode error from %s: %s\n",
                             from.to_string().c_str(), e.what());
                continue;
            }
            if (pkt.kind == PacketKind::SyncReq) {
                Packet resp;
                resp.kind = PacketKind::SyncResp;
                resp.source_id = pkt.source_id;
                resp.info_type = pkt.info_type;
                resp.seq = pkt.seq;
                resp.aux_timestamps = {pkt.aux_timestamps[0], t, mono_now_us()};
                sock.send_to(encode(resp), from);
                continue;
            }
            if (pkt.kind == PacketKind::Poll || pkt.kind == PacketKind::SyncResp) {
                ++decode_errors;
                continue;
            }
            const bool known = dest.has_instance(pkt.instance());
            peers[pkt.instance()] = from;
            const Timestamp ts{t};
            if (!known && deliveries_log.is_open()) {
                // registration row: anchors the recomputed tracker's start
                deliveries_log << pkt.instance() << "," << t << "," << t << "\n";
            }
            if (!dest.awaiting() || dest.awaiting() == pkt.instance()) {
                auto result = dest.on_received(pkt, ts);
                handle_delivery(result.delivered);
                send_poll(result.poll, t);
            } else {
                handle_delivery(dest.on_unsolicited(pkt, ts));
            }
        }

        const std::uint64_t after = mono_now_us();
        if (poll_deadline && after >= *poll_deadline && dest.instance_count() > 0) {
            const std::uint64_t late = after - *poll_deadline;
            ++timer_fires;
            timer_late_sum_us += late;
            timer_late_max_us = std::max(timer_late_max_us, late);
            auto result = dest.on_timeout(Timestamp{after});
            handle_delivery(result.delivered);
            send_poll(result.poll, after);
        }
        if (after >= next_metrics_us) {
            metrics_out << sim::csv_row(snapshot(cfg, dest, Timestamp{after}, payload_bytes,
                                                 deliveries, decode_errors + corrupt))
                        << "\n";
            metrics_out.flush();
            next_metrics_us += 1000000;
        }
    }

    const Timestamp horizon{mono_now_us()};
    const sim::MetricsLog final_log =
        snapshot(cfg, dest, horizon, payload_bytes, deliveries, decode_errors + corrupt);
    metrics_out << sim::csv_row(final_log) << "\n";
    metrics_out.flush();

    std::printf("destination done: instances=%zu deliveries=%llu naoi_s=%.6f corrupt=%llu "
                "timeouts=%llu decode_errors=%llu unroutable=%llu\n",
                dest.instance_count(), static_cast<unsigned long long>(deliveries),
                final_log.naoi_s, static_cast<unsigned long long>(corrupt),
                static_cast<unsigned long long>(dest.timeout_count()),
                static_cast<unsigned long long>(decode_errors),
                static_cast<unsigned long long>(unroutable_polls));
    const NetworkAgeReport final_report =
        dest.instance_count() ? dest.report_at(horizon) : NetworkAgeReport{};
    for (const InstanceId id : dest.instance_ids()) {
        const auto& c = dest.counters(id);
        std::printf("instance %u/%u: polls=%llu deliveries=%llu timeouts=%llu avg_age_s=%.6f\n",
                    instance_source(id), instance_info(id),
                    static_cast<unsigned long long>(c.polls),
                    static_cast<unsigned long long>(c.deliveries),
                    static_cast<unsigned long long>(c.timeouts),
                    final_report.per_source_average.count(id)
                        ? final_report.per_source_average.at(id)
                        : 0.0);
    }
    if (timer_fires > 0) {
        std::printf("timer: fires=%llu lateness_mean_us=%llu lateness_max_us=%llu\n",
                    static_cast<unsigned long long>(timer_fires),
                    static_cast<unsigned long long>(timer_late_sum_us / timer_fires),
                    static_cast<unsigned long long>(timer_late_max_us));
    }
    return 0;
}

}  // namespace aoinet::harness
