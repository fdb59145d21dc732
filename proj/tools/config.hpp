#pragma once

#include <optional>
#include <string>

#include "trackctl/matrix.hpp"
#include "trackctl/models.hpp"
#include "trackctl/simulate.hpp"
#include "trackctl/tolerance.hpp"

namespace trackctl::cli {

enum class GainMode { target, explicit_k };

/// Everything a run needs, loaded from one JSON file. The gain is given
/// either as a closed-loop target (mode "target") or directly (mode
/// "explicit"); Q defaults to the identity when omitted.
struct RunConfig {
    PlantModel plant;
    ReferenceModel reference;
    GainMode mode = GainMode::target;
    Matrix a_cl_target;  ///< populated in target mode
    Matrix k;            ///< populated in explicit mode
    Matrix q;
    int horizon = 200;
    std::optional<Disturbance> disturbance;
    std::optional<ToleranceSpec> tolerance;
};

/// Parse and validate a configuration from JSON text. Every failure throws
/// ConfigError with a message naming the offending field.
RunConfig parse_config_text(const std::string& text);

/// Read the file at `path` and parse it.
RunConfig parse_config(const std::string& path);

}  // namespace trackctl::cli
