#include <doctest.h>

#include "raretail/config.hpp"
#include "raretail/experiment.hpp"

using namespace raretail;

namespace {
ordered_json minimal_doc() {
    return ordered_json{
        {"experiment", "nfold"},
        {"engine", {{"seed", 7}, {"n_per_level", 100}}},
        {"output_dir", "out"},
        {"spec",
         {{"vector_law",
           {{"kind", "independent"},
            {"marginals", ordered_json::array(
                              {ordered_json{{"family", "pareto"},
                                            {"params", {{"alpha", 2.0}, {"xm", 1.0}}}},
                               ordered_json{{"family", "pareto"},
                                            {"params", {{"alpha", 2.0}, {"xm", 1.0}}}}})}}},
          {"set", {{"kind", "halfspace"}, {"weights", {0.5, 0.5}}, {"c", 1.0}}},
          {"n", 2},
          {"x_grid", {5.0, 10.0}}}}};
}
}  // namespace

TEST_CASE("configs round-trip through parse and serialize") {
    const ordered_json doc = minimal_doc();
    const ExperimentConfig cfg = parse_config(doc);
    const ordered_json again = serialize_config(cfg);
    const ExperimentConfig cfg2 = parse_config(again);
    CHECK(serialize_config(cfg2) == again);
    CHECK(cfg2.experiment == "nfold");
    CHECK(cfg2.engine.seed == 7);
    CHECK(cfg2.engine.n_per_level == 100);
}

TEST_CASE("unknown keys are rejected with a path") {
    ordered_json doc = minimal_doc();
    doc["mystery"] = 1;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        CHECK(e.json_path == "/mystery");
    }

    doc = minimal_doc();
    doc["engine"]["budget"] = 5;  // not an engine knob
    CHECK_THROWS_AS(parse_config(doc), ConfigError);

    doc = minimal_doc();
    doc["spec"]["extra"] = 5;
    CHECK_THROWS_AS(parse_config(doc), ConfigError);

    doc = minimal_doc();
    doc["spec"]["vector_law"]["marginals"][0]["params"]["nu"] = 3;
    ExperimentConfig cfg = parse_config(doc);  // deep law params check happens at build
    CHECK_THROWS_AS(validate_experiment(cfg), ConfigError);
}

TEST_CASE("unknown experiment names are rejected") {
    ordered_json doc = minimal_doc();
    doc["experiment"] = "frobnicate";
    CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("law builders accept every family and refuse bad parameters") {
    const ordered_json p{{"family", "weibull"}, {"params", {{"shape", 0.5}, {"scale", 2.0}}}};
    const ScalarLaw w = law_from_json(p, "");
    CHECK(w.family() == Family::Weibull);
    CHECK(law_to_json(w) == p);
    CHECK_THROWS_AS(
        law_from_json(ordered_json{{"family", "pareto"}, {"params", {{"alpha", 2.0}}}}, ""),
        ConfigError);
    CHECK_THROWS_AS(law_from_json(ordered_json{{"family", "cauchy"}, {"params", {}}}, ""),
                    ConfigError);
}

TEST_CASE("set and arrival builders") {
    const RareSet s = set_from_json(
        ordered_json{{"kind", "orthant"}, {"thresholds", {1.0, 2.0}}}, "");
    CHECK(s.dim() == 2);
    const RareSet rt = set_from_json(ordered_json{{"kind", "ruin_translate"},
                                                  {"allocation", {0.4, 0.6}},
                                                  {"ruin_kind", "any_negative"}},
                                     "");
    CHECK(rt.directions().size() == 2);
    CHECK_THROWS_AS(set_from_json(ordered_json{{"kind", "ball"}}, ""), ConfigError);
    const CountingProcess cp = arrivals_from_json(
        ordered_json{{"kind", "poisson"}, {"rate", 2.0}}, "");
    CHECK(cp.analytic_lambda(3.0) == doctest::Approx(6.0));
    CHECK_THROWS_AS(arrivals_from_json(ordered_json{{"kind", "hawkes"}}, ""), ConfigError);
}

TEST_CASE("config hashes are stable and sensitive") {
    const ordered_json a = minimal_doc();
    ordered_json b = minimal_doc();
    b["engine"]["seed"] = 8;
    CHECK(config_hash(a) == config_hash(minimal_doc()));
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("every bundled preset parses and validates") {
    const auto& metas = list_presets();
    CHECK(metas.size() >= 8);
    bool th51 = false, th61 = false, cor41 = false;
    for (const auto& p : metas) {
        th51 = th51 || p.name == "th5_1_surface";
        th61 = th61 || p.name == "th6_1_entrance";
        cor41 = cor41 || p.name == "cor4_1_mrv";
        const ExperimentConfig cfg = parse_config(preset_config(p.name));
        CHECK_NOTHROW(validate_experiment(cfg));
    }
    CHECK(th51);
    CHECK(th61);
    CHECK(cor41);
    CHECK_THROWS_AS(preset_config("missing"), ConfigError);
}
