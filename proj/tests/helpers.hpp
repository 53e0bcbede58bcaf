#pragma once

#include <cstdint>
#include <vector>

#include "aoinet/age.hpp"
#include "aoinet/queueing.hpp"
#include "aoinet/sim/rng.hpp"
#include "aoinet/time.hpp"
#include "aoinet/wire.hpp"

namespace testutil {

using aoinet::Packet;
using aoinet::PacketKind;
using aoinet::Timestamp;

inline std::vector<std::uint8_t> random_bytes(aoinet::sim::Stream& rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) {
        b = static_cast<std::uint8_t>(rng.below(256));
    }
    return out;
}

/// A uniformly random packet from the valid wire space.
inline Packet random_valid_packet(aoinet::sim::Stream& rng) {
    Packet p;
    p.kind = static_cast<PacketKind>(1 + rng.below(6));
    p.source_id = static_cast<std::uint16_t>(rng.below(65536));
    p.info_type = static_cast<std::uint8_t>(rng.below(256));
    p.seq = static_cast<std::uint32_t>(rng.below(1ull << 32));
    p.gen_timestamp = Timestamp{rng.below(1ull << 50)};
    switch (p.kind) {
        case PacketKind::Data:
            p.frag_index = 0;
            p.frag_total = 1;
            p.payload = random_bytes(rng, 1 + rng.below(2000));
            break;
        case PacketKind::Frag: {
            p.frag_total = static_cast<std::uint16_t>(2 + rng.below(100));
            p.frag_index = static_cast<std::uint16_t>(rng.below(p.frag_total));
            p.payload = random_bytes(rng, 1 + rng.below(2000));
            break;
        }
        case PacketKind::Poll:
            if (rng.bernoulli(0.5)) {
                p.frag_total = static_cast<std::uint16_t>(1 + rng.below(100));
                p.frag_index = static_cast<std::uint16_t>(rng.below(p.frag_total));
            }
            break;
        case PacketKind::SyncReq:
            p.aux_timestamps[0] = rng.below(1ull << 50);
            break;
        case PacketKind::SyncResp:
            p.aux_timestamps = {rng.below(1ull << 50), rng.below(1ull << 50),
                                rng.below(1ull << 50)};
            break;
        default:
            break;
    }
    return p;
}

/// One random arrival/service trace fed to the production LCFS-1 queue and
/// to an unbounded newest-first stack, both served at the same opportunity
/// instants. True when the two age sample paths are pointwise identical.
inline bool lcfs1_equivalent_trace(std::uint64_t seed, int events = 400) {
    aoinet::sim::Stream rng(seed, "lcfs1-equivalence");
    aoinet::Lcfs1Queue lcfs;
    std::vector<aoinet::Update> stack;  // unbounded; newest at the back
    aoinet::AgeTracker lcfs_age;
    aoinet::AgeTracker stack_age;

    std::uint64_t t = 0;
    for (int i = 0; i < events; ++i) {
        t += 1 + rng.below(1000);
        if (rng.bernoulli(0.55)) {
            aoinet::Update u;
            u.gen_timestamp = aoinet::Timestamp{t};
            lcfs.push(u);
            stack.push_back(u);
        } else {
            if (auto u = lcfs.take()) {
                lcfs_age.observe_delivery(u->gen_timestamp, aoinet::Timestamp{t});
            }
            if (!stack.empty()) {
                aoinet::Update u = stack.back();
                stack.pop_back();
                stack_age.observe_delivery(u.gen_timestamp, aoinet::Timestamp{t});
            }
            if (lcfs_age.last_fresh_timestamp() != stack_age.last_fresh_timestamp()) {
                return false;
            }
        }
    }
    const aoinet::Timestamp horizon{t + 1};
    lcfs_age.advance_to(horizon);
    stack_age.advance_to(horizon);
    return lcfs_age.time_average_age(horizon) == stack_age.time_average_age(horizon);
}

}  // namespace testutil
