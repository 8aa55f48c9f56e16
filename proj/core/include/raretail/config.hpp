#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "raretail/counting.hpp"
#include "raretail/engine.hpp"
#include "raretail/rare_set.hpp"
#include "raretail/risk.hpp"
#include "raretail/scalar_law.hpp"
#include "raretail/vector_law.hpp"

namespace raretail {

using ordered_json = nlohmann::ordered_json;

// Schema violations carry the offending path for the CLI diagnostics.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), json_path(path) {}
    std::string json_path;
};

struct EngineSettings {
    std::uint64_t seed = 20240801;
    int workers = 0;
    double budget_scale = 1.0;
    int replicates = 10;
    long n_per_level = 20000;
    long pilot_n = 4000;
    int max_levels = 12;
    long chunk = 8192;

    EngineConfig engine(std::uint32_t module_tag) const;
};

struct ExperimentConfig {
    std::string experiment;
    EngineSettings engine;
    std::string output_dir = "out";
    ordered_json body;  // experiment-specific fields, validated strictly
    ordered_json raw;   // the full document as parsed
};

// Strict parsing: unknown keys anywhere are rejected.
ExperimentConfig parse_config(const ordered_json& doc);
ExperimentConfig parse_config_file(const std::string& path);
ordered_json serialize_config(const ExperimentConfig& cfg);

// Object builders shared by the experiments and the tests.
ScalarLaw law_from_json(const ordered_json& j, const std::string& path);
ordered_json law_to_json(const ScalarLaw& law);
VectorLaw vector_law_from_json(const ordered_json& j, const std::string& path);
RareSet set_from_json(const ordered_json& j, const std::string& path);
CountingProcess arrivals_from_json(const ordered_json& j, const std::string& path);

// FNV-1a over the canonical dump; recorded in every report.
std::uint64_t config_hash(const ordered_json& doc);

const std::vector<std::string>& known_experiments();

}  // namespace raretail
