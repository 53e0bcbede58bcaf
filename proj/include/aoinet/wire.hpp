#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoinet/queueing.hpp"
#include "aoinet/time.hpp"

namespace aoinet {

constexpr std::uint8_t kProtocolVersion = 0x01;
constexpr std::size_t kHeaderSize = 47;
constexpr std::size_t kMaxPayload = 65535;

enum class PacketKind : std::uint8_t {
    Poll = 0x01,
    Data = 0x02,
    Empty = 0x03,
    Frag = 0x04,
    SyncReq = 0x05,
    SyncResp = 0x06,
};

const char* kind_name(PacketKind kind);

/// One wire frame. Fixed 47-byte big-endian header followed by the payload.
///
/// Field use by kind:
///   Poll      seq/frag_index/frag_total acknowledge the last correctly
///             received fragment; (0, 0) in the frag fields means no
///             fragment stream is being acknowledged.
///   Data      one complete update; frag_index=0, frag_total=1.
///   Empty     queue-was-empty response; gen_timestamp is the send time.
///   Frag      frag_index < frag_total, frag_total >= 2; all fragments of an
///             update share seq and gen_timestamp.
///   SyncReq   aux_timestamps[0] = requester transmit time.
///   SyncResp  aux_timestamps = {echoed T1, receive T2, transmit T3}.
/// aux_timestamps must be zero outside the sync kinds; only Data/Frag carry
/// a payload.
struct Packet {
    std::uint8_t version = kProtocolVersion;
    PacketKind kind = PacketKind::Poll;
    std::uint16_t source_id = 0;
    std::uint8_t info_type = 0;
    std::uint32_t seq = 0;
    std::uint16_t frag_index = 0;
    std::uint16_t frag_total = 0;
    Timestamp gen_timestamp;
    std::array<std::uint64_t, 3> aux_timestamps{};
    std::vector<std::uint8_t> payload;

    InstanceId instance() const { return make_instance_id(source_id, info_type); }
    std::size_t wire_size() const { return kHeaderSize + payload.size(); }

    bool operator==(const Packet&) const = default;
};

/// Decode/encode failure naming the offending field.
class WireError : public std::runtime_error {
public:
    WireError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Serialize. Throws WireError if the packet violates the per-kind rules.
std::vector<std::uint8_t> encode(const Packet& packet);

/// Parse and validate a frame. Throws WireError on bad version, unknown
/// kind, per-kind field violations, or a length that does not match
/// payload_len exactly.
Packet decode(std::span<const std::uint8_t> bytes);

/// Split an update into wire packets: a single Data packet when it fits,
/// otherwise ceil(size/mtu_payload) fragments sharing seq and gen_timestamp.
/// Zero-size updates and fragment counts beyond 65535 are rejected.
std::vector<Packet> fragment(const Update& update, std::uint16_t source_id, std::uint32_t seq,
                             std::size_t mtu_payload);

}  // namespace aoinet
