#include "aoinet/wire.hpp"

namespace aoinet {

const char* kind_name(PacketKind kind) {
    switch (kind) {
        case PacketKind::Poll: return "POLL";
        case PacketKind::Data: return "DATA";
        case PacketKind::Empty: return "EMPTY";
        case PacketKind::Frag: return "FRAG";
        case PacketKind::SyncReq: return "SYNC_REQ";
        case PacketKind::SyncResp: return "SYNC_RESP";
    }
    return "?";
}

namespace {

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void put64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

std::uint16_t get16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint32_t get32(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        v = (v << 8) | b[at + i];
    }
    return v;
}

std::uint64_t get64(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        v = (v << 8) | b[at + i];
    }
    return v;
}

void validate(const Packet& p) {
    if (p.version != kProtocolVersion) {
        throw WireError("version", "unsupported value " + std::to_string(p.version));
    }
    const auto k = static_cast<std::uint8_t>(p.kind);
    if (k < 0x01 || k > 0x06) {
        throw WireError("kind", "unknown value " + std::to_string(k));
    }
    if (p.payload.size() > kMaxPayload) {
        throw WireError("payload_len", "exceeds " + std::to_string(kMaxPayload));
    }
    const bool carries_payload = p.kind == PacketKind::Data || p.kind == PacketKind::Frag;
    if (!carries_payload && !p.payload.empty()) {
        throw WireError("payload_len", std::string(kind_name(p.kind)) + " must not carry payload");
    }
    const bool sync = p.kind == PacketKind::SyncReq || p.kind == PacketKind::SyncResp;
    if (!sync && (p.aux_timestamps[0] || p.aux_timestamps[1] || p.aux_timestamps[2])) {
        throw WireError("aux_timestamps", "nonzero outside sync packets");
    }
    if (p.kind == PacketKind::SyncReq && (p.aux_timestamps[1] || p.aux_timestamps[2])) {
        throw WireError("aux_timestamps", "SYNC_REQ carries only the originate timestamp");
    }
    switch (p.kind) {
        case PacketKind::Data:
            if (p.frag_index != 0 || p.frag_total != 1) {
                throw WireError("frag_total", "DATA requires frag_index=0, frag_total=1");
            }
            if (p.payload.empty()) {
                throw WireError("payload_len", "DATA requires a nonempty payload");
            }
            break;
        case PacketKind::Frag:
            if (p.frag_total < 2) {
                throw WireError("frag_total", "FRAG requires frag_total >= 2");
            }
            if (p.frag_index >= p.frag_total) {
                throw WireError("frag_index", "must be below frag_total");
            }
            if (p.payload.empty()) {
                throw WireError("payload_len", "FRAG requires a nonempty payload");
            }
            break;
        case PacketKind::Poll:
            if (!(p.frag_index < p.frag_total || (p.frag_index == 0 && p.frag_total == 0))) {
                throw WireError("frag_index", "POLL ack must satisfy index < total or be (0,0)");
            }
            break;
        default:
            if (p.frag_index != 0 || p.frag_total != 0) {
                throw WireError("frag_index",
                                std::string(kind_name(p.kind)) + " requires zero frag fields");
            }
            break;
    }
}

}  // namespace

std::vector<std::uint8_t> encode(const Packet& p) {
    validate(p);
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + p.payload.size());
    out.push_back(p.version);
    out.push_back(static_cast<std::uint8_t>(p.kind));
    put16(out, p.source_id);
    out.push_back(p.info_type);
    put32(out, p.seq);
    put16(out, p.frag_index);
    put16(out, p.frag_total);
    put64(out, p.gen_timestamp.us);
    for (std::uint64_t aux : p.aux_timestamps) {
        put64(out, aux);
    }
    put16(out, static_cast<std::uint16_t>(p.payload.size()));
    out.insert(out.end(), p.payload.begin(), p.payload.end());
    return out;
}

Packet decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) {
        throw WireError("length", "frame shorter than the 47-byte header");
    }
    Packet p;
    p.version = bytes[0];
    p.kind = static_cast<PacketKind>(bytes[1]);
    p.source_id = get16(bytes, 2);
    p.info_type = bytes[4];
    p.seq = get32(bytes, 5);
    p.frag_index = get16(bytes, 9);
    p.frag_total = get16(bytes, 11);
    p.gen_timestamp.us = get64(bytes, 13);
    for (std::size_t i = 0; i < 3; ++i) {
        p.aux_timestamps[i] = get64(bytes, 21 + 8 * i);
    }
    const std::uint16_t payload_len = get16(bytes, 45);
    if (bytes.size() != kHeaderSize + payload_len) {
        throw WireError("payload_len",
                        "declared " + std::to_string(payload_len) + " bytes, frame carries " +
                            std::to_string(bytes.size() - kHeaderSize));
    }
    p.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
    validate(p);
    return p;
}

std::vector<Packet> fragment(const Update& update, std::uint16_t source_id, std::uint32_t seq,
                             std::size_t mtu_payload) {
    if (mtu_payload == 0) {
        throw std::invalid_argument("fragment: mtu_payload must be positive");
    }
    if (mtu_payload > kMaxPayload) {
        throw std::invalid_argument("fragment: mtu_payload exceeds the 16-bit payload field");
    }
    if (update.size() == 0) {
        throw std::invalid_argument("fragment: zero-size updates are rejected");
    }
    std::vector<Packet> packets;
    if (update.size() <= mtu_payload) {
        Packet p;
        p.kind = PacketKind::Data;
        p.source_id = source_id;
        p.info_type = update.info_type;
        p.seq = seq;
        p.frag_index = 0;
        p.frag_total = 1;
        p.gen_timestamp = update.gen_timestamp;
        p.payload = update.payload;
        packets.push_back(std::move(p));
        return packets;
    }
    const std::size_t n = (update.size() + mtu_payload - 1) / mtu_payload;
    if (n > 65535) {
        throw std::invalid_argument("fragment: update needs more than 65535 fragments");
    }
    packets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Packet p;
        p.kind = PacketKind::Frag;
        p.source_id = source_id;
        p.info_type = update.info_type;
        p.seq = seq;
        p.frag_index = static_cast<std::uint16_t>(i);
        p.frag_total = static_cast<std::uint16_t>(n);
        p.gen_timestamp = update.gen_timestamp;
        const std::size_t begin = i * mtu_payload;
        const std::size_t end = std::min(begin + mtu_payload, update.size());
        p.payload.assign(update.payload.begin() + begin, update.payload.begin() + end);
        packets.push_back(std::move(p));
    }
    return packets;
}

}  // namespace aoinet
