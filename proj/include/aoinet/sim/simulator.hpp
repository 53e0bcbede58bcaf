#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aoinet/machines.hpp"
#include "aoinet/sim/config.hpp"
#include "aoinet/sim/metrics.hpp"
#include "aoinet/wire.hpp"

namespace aoinet::sim {

/// One protocol-automaton interaction, recorded so a run can be replayed
/// through fresh machines and checked for identical actions.
struct TraceEntry {
    enum class Kind : std::uint8_t {
        DestStart,      // bootstrap poll
        SourceUpdate,   // update_generated(update)
        SourcePoll,     // poll_received(in) -> out
        DestReceived,   // on_received(in) -> poll out
        DestTimeout,    // on_timeout() -> poll out
    } kind;
    InstanceId instance = 0;
    Timestamp at;
    Update update;              // SourceUpdate
    Packet in;                  // SourcePoll / DestReceived
    std::optional<Packet> out;  // emitted packet, if any
};

/// Run one experiment. Deterministic in (config, seed); throws
/// std::invalid_argument listing the offending fields on a bad config.
/// `trace`, when given, records every machine interaction (polling mode
/// only).
MetricsLog run(const SimConfig& config, std::vector<TraceEntry>* trace = nullptr);

enum class SweepAxis : std::uint8_t { Lambda, NSources, Capacity };

struct SweepPointError {
    std::size_t index = 0;
    double value = 0.0;
    std::string message;
};

struct SweepResult {
    std::vector<MetricsLog> rows;
    std::vector<SweepPointError> errors;
};

/// One run per grid point; the point's seed is base.seed XOR the point
/// index. Per-point failures are collected and the sweep continues. Throws
/// std::invalid_argument on an empty grid.
SweepResult sweep(const SimConfig& base, SweepAxis axis, const std::vector<double>& grid);

/// Derive the config at one sweep point (exposed for tests and the CLI).
SimConfig sweep_point(const SimConfig& base, SweepAxis axis, double value, std::size_t index);

std::string sweep_csv(const SweepResult& result);

}  // namespace aoinet::sim
