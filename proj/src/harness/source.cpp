#include <cstdio>
#include <map>
#include <optional>
#include <vector>

#include "aoinet/harness/emulator.hpp"
#include "aoinet/harness/runner.hpp"
#include "aoinet/harness/socket.hpp"
#include "aoinet/machines.hpp"
#include "aoinet/sync.hpp"
#include "aoinet/wire.hpp"

namespace aoinet::harness {

namespace {

/// One R-exchange burst; returns the minimum-delay offset, or nothing if
/// every exchange timed out.
std::optional<ClockOffset> sync_burst(UdpSocket& sock, const Endpoint& peer,
                                      std::uint16_t source_id, std::uint32_t exchanges) {
    OffsetEstimator estimator;
    for (std::uint32_t k = 0; k < exchanges; ++k) {
        Packet req;
        req.kind = PacketKind::SyncReq;
        req.source_id = source_id;
        req.seq = k;
        const std::uint64_t t1 = mono_now_us();
        req.aux_timestamps[0] = t1;
        sock.send_to(encode(req), peer);
        const auto reply = sock.receive(250);
        const std::uint64_t t4 = mono_now_us();
        if (!reply) {
            continue;
        }
        try {
            const Packet resp = decode(reply->first);
            if (resp.kind != PacketKind::SyncResp || resp.seq != k ||
                resp.aux_timestamps[0] != t1) {
                continue;
            }
            estimator.add(sync_offset(Timestamp{t1}, Timestamp{resp.aux_timestamps[1]},
                                      Timestamp{resp.aux_timestamps[2]}, Timestamp{t4}));
        } catch (const std::exception&) {
            continue;
        }
    }
    return estimator.best();
}

struct InstanceRuntime {
    SourceMachine machine;
    SensorEmulator emulator;
    std::uint64_t polls_seen = 0;
    std::uint64_t packets_sent = 0;
    std::uint64_t bytes_sent = 0;
};

}  // namespace

int run_source(const HarnessConfig& cfg) {
    auto errors = cfg.validate();
    if (cfg.role != Role::Source) {
        errors.push_back("role: run_source needs role=source");
    }
    if (!errors.empty()) {
        for (const auto& e : errors) {
            std::fprintf(stderr, "config error: %s\n", e.c_str());
        }
        return 2;
    }

    UdpSocket sock;
    Endpoint peer;
    try {
        peer = parse_endpoint(cfg.peer);
        sock.bind(Endpoint{0, 0});  // ephemeral
    } catch (const std::exception& e) {
        std::fprintf(stderr, "source: %s\n", e.what());
        return 3;
    }

    // Startup clock sync: a few bursts before giving up on the destination.
    std::optional<ClockOffset> offset;
    for (int attempt = 0; attempt < 3 && !offset; ++attempt) {
        offset = sync_burst(sock, peer, cfg.source_id, cfg.sync_exchanges);
    }
    if (!offset) {
        std::fprintf(stderr, "source %u: destination %s unreachable (sync failed)\n",
                     cfg.source_id, cfg.peer.c_str());
        return 3;
    }
    std::int64_t theta_us = static_cast<std::int64_t>(offset->offset_us);
    std::fprintf(stderr, "source %u: clock offset %+lld us (delay %lld us)\n", cfg.source_id,
                 static_cast<long long>(theta_us), static_cast<long long>(offset->delay_us));

    auto corrected = [&theta_us](std::uint64_t mono) {
        const std::int64_t t = static_cast<std::int64_t>(mono) + theta_us;
        return Timestamp{t > 0 ? static_cast<std::uint64_t>(t) : 0};
    };

    std::map<std::uint8_t, InstanceRuntime> instances;
    for (const std::string& name : cfg.profiles) {
        const ProfileSpec profile = *profile_by_name(name);
        SourceMachine::Config scfg;
        scfg.source_id = cfg.source_id;
        scfg.info_type = profile.info_type;
        scfg.mtu_payload = cfg.mtu_payload;
        instances.emplace(profile.info_type,
                          InstanceRuntime{SourceMachine(scfg),
                                          SensorEmulator(profile, cfg.jitter, cfg.seed,
                                                         cfg.source_id)});
    }

    auto register_instances = [&] {
        for (auto& [info, rt] : instances) {
            Packet reg;
            reg.kind = PacketKind::Empty;
            reg.source_id = cfg.source_id;
            reg.info_type = info;
            reg.gen_timestamp = corrected(mono_now_us());
            sock.send_to(encode(reg), peer);
        }
    };
    register_instances();

    const std::uint64_t end_us = static_cast<std::uint64_t>(cfg.duration_s * 1e6);
    const std::uint64_t resync_us = static_cast<std::uint64_t>(cfg.resync_s * 1e6);
    std::uint64_t next_resync = resync_us ? resync_us : end_us + 1;
    std::uint64_t next_reregister = 1000000;  // until the first poll arrives
    std::uint64_t reregister_budget = 5;
    bool polled_once = false;
    std::uint64_t decode_errors = 0;

    while (true) {
        const std::uint64_t now = mono_now_us();
        if (now >= end_us) {
            break;
        }
        std::uint64_t wake = end_us;
        for (const auto& [info, rt] : instances) {
            wake = std::min(wake, rt.emulator.next_due_us());
        }
        wake = std::min(wake, next_resync);
        if (!polled_once) {
            wake = std::min(wake, next_reregister);
        }
        const int wait_ms = now >= wake ? 0 : static_cast<int>((wake - now + 999) / 1000);

        auto datagram = sock.receive(wait_ms);
        std::uint64_t t = mono_now_us();

        if (datagram) {
            try {
                const Packet pkt = decode(datagram->first);
                if (pkt.kind == PacketKind::Poll && pkt.source_id == cfg.source_id) {
                    auto it = instances.find(pkt.info_type);
                    if (it != instances.end()) {
                        polled_once = true;
                        ++it->second.polls_seen;
                        if (auto out = it->second.machine.poll_received(pkt, corrected(t))) {
                            const auto bytes = encode(*out);
                            sock.send_to(bytes, peer);
                            ++it->second.packets_sent;
                            it->second.bytes_sent += bytes.size();
                        }
                    }
                }
            } catch (const std::exception&) {
                ++decode_errors;
            }
        }

        t = mono_now_us();
        for (auto& [info, rt] : instances) {
            while (rt.emulator.next_due_us() <= t) {
                rt.machine.update_generated(rt.emulator.emit(corrected(rt.emulator.next_due_us())));
            }
        }
        if (!polled_once && t >= next_reregister && reregister_budget > 0) {
            register_instances();
            --reregister_budget;
            next_reregister = t + 1000000;
        }
        if (resync_us && t >= next_resync) {
            if (auto fresh = sync_burst(sock, peer, cfg.source_id, cfg.sync_exchanges)) {
                const std::int64_t drift = static_cast<std::int64_t>(fresh->offset_us) - theta_us;
                std::fprintf(stderr, "source %u: resync drift %+lld us\n", cfg.source_id,
                             static_cast<long long>(drift));
                theta_us = static_cast<std::int64_t>(fresh->offset_us);
            }
            next_resync = t + resync_us;
        }
    }

    for (const auto& [info, rt] : instances) {
        std::printf("source %u/%u done: generated=%llu polls=%llu sent=%llu bytes=%llu "
                    "replaced=%llu decode_errors=%llu\n",
                    cfg.source_id, info,
                    static_cast<unsigned long long>(rt.emulator.emitted_count()),
                    static_cast<unsigned long long>(rt.polls_seen),
                    static_cast<unsigned long long>(rt.packets_sent),
                    static_cast<unsigned long long>(rt.bytes_sent),
                    static_cast<unsigned long long>(rt.machine.queue_drop_count()),
                    static_cast<unsigned long long>(decode_errors));
    }
    return 0;
}

}  // namespace aoinet::harness
