// Batch front door: run experiment configs, validate them, list the bundled
// presets. Outputs land in <output_dir>/{report.json, data.csv}.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "raretail/experiment.hpp"

using raretail::ConfigError;
using raretail::ExperimentConfig;
using raretail::ordered_json;

namespace {

int apply_overrides(ExperimentConfig& cfg, long seed, int workers, double budget_scale,
                    const std::string& out_dir) {
    if (seed >= 0) cfg.engine.seed = static_cast<std::uint64_t>(seed);
    if (workers >= 0) cfg.engine.workers = workers;
    if (const char* env = std::getenv("RARETAIL_WORKERS"); env && workers < 0)
        cfg.engine.workers = std::atoi(env);
    if (budget_scale > 0.0) cfg.engine.budget_scale *= budget_scale;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return 0;
}

ExperimentConfig load(const std::string& config_path, const std::string& preset) {
    if (!preset.empty()) return raretail::parse_config(raretail::preset_config(preset));
    if (config_path.empty())
        throw ConfigError("/", "either a config path or --preset is required");
    return raretail::parse_config_file(config_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rare-set tail asymptotics: batch experiment runner"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir;
    long seed = -1;
    int workers = -1;
    double budget_scale = 0.0;

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "path to a JSON experiment config");
    run->add_option("--preset", preset, "run a bundled preset instead of a file");
    run->add_option("--seed", seed, "override the engine seed");
    run->add_option("--workers", workers, "override the worker count (0 = auto)");
    run->add_option("--budget-scale", budget_scale, "scale all sampling budgets");
    run->add_option("--out", out_dir, "override the output directory");

    CLI::App* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "path to a JSON experiment config");
    validate->add_option("--preset", preset, "validate a bundled preset");

    CLI::App* lp = app.add_subcommand("list-presets", "print the bundled presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lp->parsed()) {
            for (const auto& p : raretail::list_presets())
                std::printf("%-22s %s\n", p.name.c_str(), p.description.c_str());
            return 0;
        }
        if (validate->parsed()) {
            ExperimentConfig cfg = load(config_path, preset);
            raretail::validate_experiment(cfg);
            std::printf("ok: %s\n", cfg.experiment.c_str());
            return 0;
        }
        ExperimentConfig cfg = load(config_path, preset);
        apply_overrides(cfg, seed, workers, budget_scale, out_dir);
        return raretail::run_experiment(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error at %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "precondition error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
