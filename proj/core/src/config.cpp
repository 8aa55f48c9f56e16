#include "raretail/config.hpp"

#include <fstream>

namespace raretail {

namespace {

void check_keys(const ordered_json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) throw ConfigError(path + "/" + item.key(), "unknown key");
    }
}

const ordered_json& need(const ordered_json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path, std::string("missing required key '") + key + "'");
    return *it;
}

double need_num(const ordered_json& j, const char* key, const std::string& path) {
    const ordered_json& v = need(j, key, path);
    if (!v.is_number()) throw ConfigError(path + "/" + key, "expected a number");
    return v.get<double>();
}

std::vector<double> need_vec(const ordered_json& j, const char* key, const std::string& path) {
    const ordered_json& v = need(j, key, path);
    if (!v.is_array()) throw ConfigError(path + "/" + key, "expected an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(path + "/" + key, "expected numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

EngineConfig EngineSettings::engine(std::uint32_t module_tag) const {
    EngineConfig cfg;
    cfg.seed = seed;
    cfg.module_tag = module_tag;
    cfg.workers = workers;
    cfg.chunk = chunk;
    cfg.replicates = replicates;
    cfg.n_per_level = std::max<long>(16, static_cast<long>(n_per_level * budget_scale));
    cfg.pilot_n = std::max<long>(64, static_cast<long>(pilot_n * budget_scale));
    cfg.max_levels = max_levels;
    return cfg;
}

ScalarLaw law_from_json(const ordered_json& j, const std::string& path) {
    check_keys(j, path, {"family", "params"});
    const std::string family = need(j, "family", path).get<std::string>();
    const ordered_json& p = need(j, "params", path);
    const std::string pp = path + "/params";
    if (family == "pareto") {
        check_keys(p, pp, {"alpha", "xm"});
        return ScalarLaw::pareto(need_num(p, "alpha", pp), need_num(p, "xm", pp));
    }
    if (family == "weibull") {
        check_keys(p, pp, {"shape", "scale"});
        return ScalarLaw::weibull(need_num(p, "shape", pp), need_num(p, "scale", pp));
    }
    if (family == "lognormal") {
        check_keys(p, pp, {"mu", "sigma"});
        return ScalarLaw::lognormal(need_num(p, "mu", pp), need_num(p, "sigma", pp));
    }
    if (family == "exponential") {
        check_keys(p, pp, {"rate"});
        return ScalarLaw::exponential(need_num(p, "rate", pp));
    }
    if (family == "geometric") {
        check_keys(p, pp, {"p"});
        return ScalarLaw::geometric(need_num(p, "p", pp));
    }
    if (family == "degenerate") {
        check_keys(p, pp, {"value"});
        return ScalarLaw::degenerate(need_num(p, "value", pp));
    }
    throw ConfigError(path + "/family", "unknown family '" + family + "'");
}

ordered_json law_to_json(const ScalarLaw& law) {
    ordered_json p;
    const char* family = "";
    switch (law.family()) {
        case Family::Pareto:
            family = "pareto";
            p = {{"alpha", law.param(0)}, {"xm", law.param(1)}};
            break;
        case Family::Weibull:
            family = "weibull";
            p = {{"shape", law.param(0)}, {"scale", law.param(1)}};
            break;
        case Family::Lognormal:
            family = "lognormal";
            p = {{"mu", law.param(0)}, {"sigma", law.param(1)}};
            break;
        case Family::Exponential:
            family = "exponential";
            p = {{"rate", law.param(0)}};
            break;
        case Family::Geometric:
            family = "geometric";
            p = {{"p", law.param(0)}};
            break;
        case Family::Degenerate:
            family = "degenerate";
            p = {{"value", law.param(0)}};
            break;
    }
    return ordered_json{{"family", family}, {"params", p}};
}

VectorLaw vector_law_from_json(const ordered_json& j, const std::string& path) {
    const std::string kind = need(j, "kind", path).get<std::string>();
    if (kind == "independent") {
        check_keys(j, path, {"kind", "marginals"});
        const ordered_json& m = need(j, "marginals", path);
        if (!m.is_array() || m.empty())
            throw ConfigError(path + "/marginals", "expected a non-empty array");
        std::vector<ScalarLaw> laws;
        for (std::size_t i = 0; i < m.size(); ++i)
            laws.push_back(law_from_json(m[i], path + "/marginals/" + std::to_string(i)));
        return VectorLaw::independent(std::move(laws));
    }
    if (kind == "lwqd") {
        check_keys(j, path, {"kind", "dim", "common", "shock_weight"});
        return VectorLaw::lwqd(static_cast<int>(need_num(j, "dim", path)),
                               law_from_json(need(j, "common", path), path + "/common"),
                               need_num(j, "shock_weight", path));
    }
    if (kind == "mrv") {
        check_keys(j, path, {"kind", "dim", "alpha", "radial", "axis_weights", "diag_weight"});
        const double diag = j.contains("diag_weight") ? need_num(j, "diag_weight", path) : 0.0;
        return VectorLaw::mrv(static_cast<int>(need_num(j, "dim", path)),
                              need_num(j, "alpha", path),
                              law_from_json(need(j, "radial", path), path + "/radial"),
                              need_vec(j, "axis_weights", path), diag);
    }
    throw ConfigError(path + "/kind", "unknown vector law kind '" + kind + "'");
}

RareSet set_from_json(const ordered_json& j, const std::string& path) {
    const std::string kind = need(j, "kind", path).get<std::string>();
    if (kind == "halfspace") {
        check_keys(j, path, {"kind", "weights", "c"});
        return RareSet::halfspace(need_vec(j, "weights", path), need_num(j, "c", path));
    }
    if (kind == "orthant") {
        check_keys(j, path, {"kind", "thresholds"});
        return RareSet::orthant_exceedance(need_vec(j, "thresholds", path));
    }
    if (kind == "ruin_translate") {
        check_keys(j, path, {"kind", "allocation", "ruin_kind"});
        const std::string rk = need(j, "ruin_kind", path).get<std::string>();
        if (rk != "sum_negative" && rk != "any_negative")
            throw ConfigError(path + "/ruin_kind", "expected sum_negative or any_negative");
        return RareSet::ruin_translate(need_vec(j, "allocation", path),
                                       rk == "sum_negative" ? RuinSetKind::SumNegative
                                                            : RuinSetKind::AnyNegative);
    }
    throw ConfigError(path + "/kind", "unknown set kind '" + kind + "'");
}

CountingProcess arrivals_from_json(const ordered_json& j, const std::string& path) {
    const std::string kind = need(j, "kind", path).get<std::string>();
    if (kind == "poisson") {
        check_keys(j, path, {"kind", "rate"});
        return CountingProcess::poisson(need_num(j, "rate", path));
    }
    if (kind == "deterministic") {
        check_keys(j, path, {"kind", "spacing"});
        return CountingProcess::deterministic(need_num(j, "spacing", path));
    }
    if (kind == "renewal") {
        check_keys(j, path, {"kind", "law"});
        return CountingProcess::renewal(law_from_json(need(j, "law", path), path + "/law"));
    }
    if (kind == "cycling") {
        check_keys(j, path, {"kind", "laws"});
        const ordered_json& laws = need(j, "laws", path);
        if (!laws.is_array() || laws.empty())
            throw ConfigError(path + "/laws", "expected a non-empty array");
        std::vector<ScalarLaw> pattern;
        for (std::size_t i = 0; i < laws.size(); ++i)
            pattern.push_back(law_from_json(laws[i], path + "/laws/" + std::to_string(i)));
        return CountingProcess::cycling(std::move(pattern));
    }
    throw ConfigError(path + "/kind", "unknown arrival kind '" + kind + "'");
}

const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> kinds = {
        "class_diag",  "maxsum", "nfold",        "kesten",
        "stopped_sum", "pld_fixed", "pld_random", "entrance",
        "ruin",        "assumption62", "weighted_uniformity"};
    return kinds;
}

namespace {

void check_body_keys(const std::string& exp, const ordered_json& body) {
    const std::string path = "/spec";
    if (exp == "class_diag") {
        check_keys(body, path, {"law", "classes", "x0", "points", "shift", "b", "t", "u_grid",
                                "cases"});
        if (body.contains("cases"))
            for (const auto& c : body["cases"])
                check_keys(c, path + "/cases", {"law", "classes", "shift", "b", "t", "u_grid"});
    } else if (exp == "maxsum") {
        check_keys(body, path, {"vector_law_1", "vector_law_2", "set", "x_grid"});
    } else if (exp == "nfold") {
        check_keys(body, path, {"vector_law", "set", "n", "x_grid"});
    } else if (exp == "kesten") {
        check_keys(body, path, {"vector_law", "set", "c", "n_max", "x_mults"});
    } else if (exp == "stopped_sum") {
        check_keys(body, path, {"vector_law", "set", "tau", "x_grid"});
    } else if (exp == "pld_fixed") {
        check_keys(body, path, {"vector_law", "set", "n_list", "x_mults"});
    } else if (exp == "pld_random") {
        check_keys(body, path,
                   {"vector_law", "set", "arrivals", "t_list", "x_mults", "check_assumptions"});
    } else if (exp == "entrance") {
        check_keys(body, path, {"risk", "set", "x_list", "t_list"});
    } else if (exp == "ruin") {
        check_keys(body, path, {"risk", "ruin_kind", "x_list", "t_list", "coupled_check_n"});
    } else if (exp == "assumption62") {
        check_keys(body, path, {"risk", "set", "c", "t_star", "n_cap", "budget"});
    } else if (exp == "weighted_uniformity") {
        check_keys(body, path, {"vector_law", "set", "n", "a", "b", "coeff_samples", "x_grid"});
    }
    if (body.contains("risk"))
        check_keys(body["risk"], path + "/risk",
                   {"allocation", "premium_caps", "interest", "horizon", "claims", "arrivals"});
}

}  // namespace

ExperimentConfig parse_config(const ordered_json& doc) {
    ExperimentConfig out;
    out.raw = doc;
    check_keys(doc, "", {"experiment", "engine", "output_dir", "spec"});
    const std::string exp = need(doc, "experiment", "").get<std::string>();
    bool known = false;
    for (const auto& k : known_experiments()) known = known || k == exp;
    if (!known) throw ConfigError("/experiment", "unknown experiment '" + exp + "'");
    out.experiment = exp;
    if (doc.contains("output_dir")) out.output_dir = doc["output_dir"].get<std::string>();
    if (doc.contains("engine")) {
        const ordered_json& e = doc["engine"];
        check_keys(e, "/engine",
                   {"seed", "workers", "budget_scale", "replicates", "n_per_level", "pilot_n",
                    "max_levels", "chunk"});
        if (e.contains("seed")) out.engine.seed = e["seed"].get<std::uint64_t>();
        if (e.contains("workers")) out.engine.workers = e["workers"].get<int>();
        if (e.contains("budget_scale")) out.engine.budget_scale = e["budget_scale"].get<double>();
        if (e.contains("replicates")) out.engine.replicates = e["replicates"].get<int>();
        if (e.contains("n_per_level")) out.engine.n_per_level = e["n_per_level"].get<long>();
        if (e.contains("pilot_n")) out.engine.pilot_n = e["pilot_n"].get<long>();
        if (e.contains("max_levels")) out.engine.max_levels = e["max_levels"].get<int>();
        if (e.contains("chunk")) out.engine.chunk = e["chunk"].get<long>();
    }
    out.body = need(doc, "spec", "");
    check_body_keys(out.experiment, out.body);
    return out;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path, std::string("JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

ordered_json serialize_config(const ExperimentConfig& cfg) {
    ordered_json e;
    e["seed"] = cfg.engine.seed;
    e["workers"] = cfg.engine.workers;
    e["budget_scale"] = cfg.engine.budget_scale;
    e["replicates"] = cfg.engine.replicates;
    e["n_per_level"] = cfg.engine.n_per_level;
    e["pilot_n"] = cfg.engine.pilot_n;
    e["max_levels"] = cfg.engine.max_levels;
    e["chunk"] = cfg.engine.chunk;
    return ordered_json{{"experiment", cfg.experiment},
                        {"engine", e},
                        {"output_dir", cfg.output_dir},
                        {"spec", cfg.body}};
}

std::uint64_t config_hash(const ordered_json& doc) {
    const std::string s = doc.dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace raretail
