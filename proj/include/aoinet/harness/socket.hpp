#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aoinet::harness {

/// IPv4 UDP endpoint.
struct Endpoint {
    std::uint32_t ip = 0;  // host byte order
    std::uint16_t port = 0;

    bool operator==(const Endpoint&) const = default;
    std::string to_string() const;
};

/// "host:port" with a dotted-quad or hostname-free host. Throws
/// std::invalid_argument on malformed input.
Endpoint parse_endpoint(const std::string& host_port);

/// Minimal RAII datagram socket (IPv4).
class UdpSocket {
public:
    UdpSocket();
    ~UdpSocket();
    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    /// Throws std::runtime_error on bind failure.
    void bind(const Endpoint& local);

    std::uint16_t local_port() const;

    void send_to(std::span<const std::uint8_t> bytes, const Endpoint& to);

    /// Blocks up to timeout_ms (0 = just poll). Empty result on timeout.
    std::optional<std::pair<std::vector<std::uint8_t>, Endpoint>> receive(int timeout_ms);

private:
    int fd_ = -1;
};

/// Monotonic microseconds since process start.
std::uint64_t mono_now_us();

}  // namespace aoinet::harness
