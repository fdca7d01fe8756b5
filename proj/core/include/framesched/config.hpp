#pragma once

#include <string>

#include "framesched/sim.hpp"

namespace framesched {

/// Builds an experiment from its JSON description. Unknown keys, missing
/// required keys and out-of-range values raise ConfigError with the offending
/// key in the message. README.md documents the schema.
ExperimentConfig parse_experiment_config(const std::string& json_text);

/// parse_experiment_config over the contents of `path`.
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace framesched
