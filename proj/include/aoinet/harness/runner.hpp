#pragma once

#include "aoinet/harness/config.hpp"

namespace aoinet::harness {

/// Run the destination loop: bind, answer sync, drive the destination
/// automaton on datagrams and timer expiries, stream metrics. Returns a
/// process exit code (0 ok, 2 config, 3 runtime).
int run_destination(const HarnessConfig& config);

/// Run one source process: clock sync against the destination, register
/// instances, answer polls from timer-driven sensor emulators.
int run_source(const HarnessConfig& config);

}  // namespace aoinet::harness
