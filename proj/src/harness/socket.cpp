#include "aoinet/harness/socket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>

namespace aoinet::harness {

std::string Endpoint::to_string() const {
    in_addr a;
    a.s_addr = htonl(ip);
    char buf[INET_ADDRSTRLEN];
    inet_ntop(AF_INET, &a, buf, sizeof(buf));
    return std::string(buf) + ":" + std::to_string(port);
}

Endpoint parse_endpoint(const std::string& host_port) {
    const std::size_t colon = host_port.rfind(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("endpoint '" + host_port + "': expected host:port");
    }
    const std::string host = host_port.substr(0, colon);
    const std::string port_str = host_port.substr(colon + 1);
    in_addr a{};
    if (inet_pton(AF_INET, host.c_str(), &a) != 1) {
        throw std::invalid_argument("endpoint '" + host_port + "': bad IPv4 address");
    }
    int port = 0;
    try {
        port = std::stoi(port_str);
    } catch (...) {
        throw std::invalid_argument("endpoint '" + host_port + "': bad port");
    }
    if (port < 0 || port > 65535) {
        throw std::invalid_argument("endpoint '" + host_port + "': port out of range");
    }
    return Endpoint{ntohl(a.s_addr), static_cast<std::uint16_t>(port)};
}

UdpSocket::UdpSocket() {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) {
        throw std::runtime_error("socket(): " + std::string(std::strerror(errno)));
    }
}

UdpSocket::~UdpSocket() {
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

void UdpSocket::bind(const Endpoint& local) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(local.ip);
    addr.sin_port = htons(local.port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        throw std::runtime_error("bind(" + local.to_string() +
                                 "): " + std::string(std::strerror(errno)));
    }
}

std::uint16_t UdpSocket::local_port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof(addr);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        return 0;
    }
    return ntohs(addr.sin_port);
}

void UdpSocket::send_to(std::span<const std::uint8_t> bytes, const Endpoint& to) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(to.ip);
    addr.sin_port = htons(to.port);
    ::sendto(fd_, bytes.data(), bytes.size(), 0, reinterpret_cast<sockaddr*>(&addr),
             sizeof(addr));
}

std::optional<std::pair<std::vector<std::uint8_t>, Endpoint>> UdpSocket::receive(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, timeout_ms);
    if (ready <= 0) {
        return std::nullopt;
    }
    std::vector<std::uint8_t> buf(65536);
    sockaddr_in from{};
    socklen_t from_len = sizeof(from);
    const ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0,
                                 reinterpret_cast<sockaddr*>(&from), &from_len);
    if (n < 0) {
        return std::nullopt;
    }
    buf.resize(static_cast<std::size_t>(n));
    return std::make_pair(std::move(buf),
                          Endpoint{ntohl(from.sin_addr.s_addr), ntohs(from.sin_port)});
}

std::uint64_t mono_now_us() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - t0).count());
}

}  // namespace aoinet::harness
