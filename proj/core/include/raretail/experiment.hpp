#pragma once

#include "raretail/config.hpp"

namespace raretail {

// Runs the configured experiment and writes <output_dir>/report.json and
// <output_dir>/data.csv. Returns the process exit code: 0 done, 2 a
// precondition failed, 3 the verdict is dominated by zero-hit estimates.
int run_experiment(const ExperimentConfig& cfg);

// Builds every object the experiment would use (laws, sets, processes,
// models) without estimating anything; throws on any schema or domain error.
void validate_experiment(const ExperimentConfig& cfg);

struct Preset {
    std::string name;
    std::string description;
};

const std::vector<Preset>& list_presets();
ordered_json preset_config(const std::string& name);  // throws ConfigError for unknown names

}  // namespace raretail
