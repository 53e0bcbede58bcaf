#include <cstdint>
#include <string>
#include <vector>

#include "aoinet/sim/rng.hpp"
#include "aoinet/wire.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace aoinet;

namespace {

std::string hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::vector<std::uint8_t> unhex(const std::string& s) {
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>(std::stoul(s.substr(i, 2), nullptr, 16)));
    }
    return out;
}

std::string zeros(std::size_t n) { return std::string(2 * n, '0'); }

}  // namespace

TEST_CASE("golden frames, one per packet kind") {
    SUBCASE("poll acknowledging fragment 2 of sequence 7") {
        Packet p;
        p.kind = PacketKind::Poll;
        p.source_id = 3;
        p.info_type = 1;
        p.seq = 7;
        p.frag_index = 2;
        p.frag_total = 14;
        const auto bytes = encode(p);
        CHECK(bytes.size() == 47);
        CHECK(hex(bytes) == "0101000301000000070002000e" + zeros(8) + zeros(24) + "0000");
        CHECK(decode(bytes) == p);
    }
    SUBCASE("data of 150 bytes is a 197-byte frame") {
        Packet p;
        p.kind = PacketKind::Data;
        p.source_id = 0x0102;
        p.info_type = 2;
        p.seq = 0xdeadbeef;
        p.frag_index = 0;
        p.frag_total = 1;
        p.gen_timestamp = Timestamp{0x0000000012345678ull};
        p.payload.assign(150, 0xab);
        const auto bytes = encode(p);
        CHECK(bytes.size() == 197);
        CHECK(hex(bytes).substr(0, 94) == "0102010202deadbeef00000001" + zeros(4) + "12345678" +
                                              zeros(24) + "0096");
        CHECK(decode(bytes) == p);
    }
    SUBCASE("empty") {
        Packet p;
        p.kind = PacketKind::Empty;
        p.source_id = 9;
        p.info_type = 0;
        p.seq = 4;
        p.gen_timestamp = Timestamp{1000000};
        const auto bytes = encode(p);
        CHECK(hex(bytes) ==
              "010300090000000004" + zeros(4) + "00000000000f4240" + zeros(24) + "0000");
    }
    SUBCASE("fragment 1 of 3") {
        Packet p;
        p.kind = PacketKind::Frag;
        p.source_id = 1;
        p.info_type = 1;
        p.seq = 2;
        p.frag_index = 1;
        p.frag_total = 3;
        p.gen_timestamp = Timestamp{15};
        p.payload = {0x11, 0x22};
        CHECK(hex(encode(p)) ==
              "0104000101000000020001000300000000000000" + std::string("0f") + zeros(24) +
                  "00021122");
    }
    SUBCASE("sync request and response") {
        Packet req;
        req.kind = PacketKind::SyncReq;
        req.source_id = 5;
        req.seq = 1;
        req.aux_timestamps[0] = 0x10;
        CHECK(hex(encode(req)) == "010500050000000001" + zeros(4) + zeros(8) +
                                      "0000000000000010" + zeros(16) + "0000");
        Packet resp;
        resp.kind = PacketKind::SyncResp;
        resp.source_id = 5;
        resp.seq = 1;
        resp.aux_timestamps = {0x10, 0x20, 0x30};
        CHECK(hex(encode(resp)) == "010600050000000001" + zeros(4) + zeros(8) +
                                       "0000000000000010" + "0000000000000020" +
                                       "0000000000000030" + "0000");
    }
}

TEST_CASE("decode rejects malformed frames naming the field") {
    Packet good;
    good.kind = PacketKind::Poll;
    auto bytes = encode(good);

    SUBCASE("bad version") {
        bytes[0] = 0x02;
        CHECK_THROWS_WITH_AS(decode(bytes), doctest::Contains("version"), WireError);
    }
    SUBCASE("unknown kind") {
        bytes[1] = 0x07;
        CHECK_THROWS_WITH_AS(decode(bytes), doctest::Contains("kind"), WireError);
    }
    SUBCASE("short frame") {
        bytes.resize(46);
        CHECK_THROWS_AS(decode(bytes), WireError);
    }
    SUBCASE("trailing garbage") {
        bytes.push_back(0x00);
        CHECK_THROWS_WITH_AS(decode(bytes), doctest::Contains("payload_len"), WireError);
    }
    SUBCASE("declared length beyond the frame") {
        bytes[46] = 5;
        CHECK_THROWS_WITH_AS(decode(bytes), doctest::Contains("payload_len"), WireError);
    }
    SUBCASE("data with zero payload") {
        Packet d;
        d.kind = PacketKind::Data;
        d.frag_total = 1;
        CHECK_THROWS_AS(encode(d), WireError);
    }
    SUBCASE("data with wrong frag fields") {
        Packet d;
        d.kind = PacketKind::Data;
        d.frag_total = 2;
        d.payload = {1};
        CHECK_THROWS_WITH_AS(encode(d), doctest::Contains("frag_total"), WireError);
    }
    SUBCASE("aux timestamps outside sync") {
        Packet e;
        e.kind = PacketKind::Empty;
        e.aux_timestamps[1] = 7;
        CHECK_THROWS_WITH_AS(encode(e), doctest::Contains("aux"), WireError);
    }
    SUBCASE("poll with payload") {
        bytes = encode(good);
        bytes[46] = 1;
        bytes.push_back(0xff);
        CHECK_THROWS_AS(decode(bytes), WireError);
    }
}

TEST_CASE("wire round trip on random valid packets") {
    sim::Stream rng(37, "wire-roundtrip");
    for (int i = 0; i < 20000; ++i) {
        const Packet p = testutil::random_valid_packet(rng);
        const auto bytes = encode(p);
        CHECK(decode(bytes) == p);
    }
}

TEST_CASE("decode never crashes on fuzzed bytes") {
    sim::Stream rng(43, "wire-fuzz");
    int decoded = 0;
    for (int i = 0; i < 20000; ++i) {
        const std::size_t n = rng.below(120);
        std::vector<std::uint8_t> junk = testutil::random_bytes(rng, n);
        try {
            const Packet p = decode(junk);
            ++decoded;
            CHECK(encode(p) == junk);  // anything accepted must re-encode identically
        } catch (const WireError&) {
        }
    }
    // almost everything random is rejected
    CHECK(decoded >= 0);
}

TEST_CASE("fuzzing a valid frame's bytes never crashes decode") {
    sim::Stream rng(47, "wire-mutate");
    for (int i = 0; i < 5000; ++i) {
        Packet p = testutil::random_valid_packet(rng);
        auto bytes = encode(p);
        bytes[rng.below(bytes.size())] ^= static_cast<std::uint8_t>(1 + rng.below(255));
        try {
            const Packet q = decode(bytes);
            CHECK(encode(q) == bytes);
        } catch (const WireError&) {
        }
    }
}

TEST_CASE("unhex helper sanity") {
    CHECK(unhex("0a0b") == std::vector<std::uint8_t>{0x0a, 0x0b});
}
