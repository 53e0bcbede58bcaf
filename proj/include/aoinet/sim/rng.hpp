#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace aoinet::sim {

/// 64-bit FNV-1a, used for stream naming and config hashing.
constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// One deterministic random stream, derived from the master seed and a name,
/// so that sweeping one parameter perturbs only the entities it names.
/// Sampling uses inverse transforms on raw 64-bit draws; the sequence depends
/// only on the mt19937_64 specification, not on library distribution
/// implementations.
class Stream {
public:
    Stream(std::uint64_t master_seed, std::string_view name)
        : gen_(splitmix64(master_seed ^ fnv1a(name))) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate.
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return gen_() % n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace aoinet::sim
