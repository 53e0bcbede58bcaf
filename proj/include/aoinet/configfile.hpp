#pragma once

#include <stdexcept>
#include <string>

#include "aoinet/harness/config.hpp"
#include "aoinet/sim/config.hpp"

namespace aoinet {

/// Parse/validation failure with file:line context.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One experiment description: "key = value" sections mapping one-to-one
/// onto a SimConfig or a HarnessConfig, plus a reproducibility block
/// ([meta]: seed, git_describe, config_hash). Unknown sections or keys are
/// rejected. Simulation sources are expressed as a uniform population with a
/// cycled channel pattern; that is the whole expressible space, and
/// parse(render(x)) == x on it.
struct ExperimentFile {
    enum class Kind { Sim, Harness } kind = Kind::Sim;
    sim::SimConfig sim;
    harness::HarnessConfig harness;
    std::string git_describe;
};

/// Parse text. `filename` seeds error locations ("file:line: message").
ExperimentFile parse_experiment(const std::string& text, const std::string& filename);

ExperimentFile load_experiment(const std::string& path);

/// Canonical rendering (fixed section and key order, hash recomputed).
/// Throws ConfigError for sim configs outside the expressible space.
std::string render_experiment(const ExperimentFile& experiment);

}  // namespace aoinet
