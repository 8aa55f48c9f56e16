#include "raretail/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "raretail/class_diagnostics.hpp"
#include "raretail/large_dev.hpp"
#include "raretail/risk.hpp"
#include "raretail/stopped_sums.hpp"

#ifndef RARETAIL_VERSION
#define RARETAIL_VERSION "0.0.0"
#endif
#ifndef RARETAIL_GIT_REV
#define RARETAIL_GIT_REV "unknown"
#endif

namespace raretail {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns) : cols_(std::move(columns)) {
        for (std::size_t i = 0; i < cols_.size(); ++i) {
            if (i) out_ += ',';
            out_ += cols_[i];
        }
        out_ += '\n';
    }
    void row(const std::vector<std::string>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out_ += ',';
            out_ += vals[i];
        }
        out_ += '\n';
    }
    const std::string& text() const { return out_; }

  private:
    std::vector<std::string> cols_;
    std::string out_;
};

ordered_json estimate_json(const Estimate& e) {
    return ordered_json{{"value", e.value},     {"std_error", e.std_error},
                        {"ci_lo", e.ci_lo},     {"ci_hi", e.ci_hi},
                        {"n_effective", e.n_effective}, {"method", to_string(e.method)},
                        {"zero_hit", e.zero_hit}};
}

ordered_json trend_json(const TrendReport& r) {
    return ordered_json{{"verdict", to_string(r.verdict)},
                        {"target", r.target},
                        {"max_dev_last_k", r.max_dev_last_k},
                        {"last_k", r.last_k},
                        {"note", r.note}};
}

void trend_rows(CsvWriter& csv, const std::string& tag, const TrendReport& r) {
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const double se = r.stderrs.empty() ? 0.0 : r.stderrs[i];
        const double scale = r.target == 0.0 ? 1.0 : std::abs(r.target);
        csv.row({tag, fmt(r.grid[i]), fmt(r.ratios[i]), fmt(se), fmt(r.target),
                 fmt(std::abs(r.ratios[i] - r.target) / scale)});
    }
}

struct Outcome {
    ordered_json report;
    std::string csv;
    int exit_code = 0;
};

const ordered_json& need(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string("/spec"), std::string("missing required key '") + key + "'");
    return *it;
}

std::vector<double> dvec(const ordered_json& j) { return j.get<std::vector<double>>(); }

// ---------------------------------------------------------------- class_diag
void diag_one_law(const ordered_json& b, const ScalarLaw& law,
                  const std::vector<std::string>& classes, const DiagnosticOptions& opts,
                  CsvWriter& csv, ordered_json& verdicts);

Outcome run_class_diag(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    DiagnosticOptions opts;
    if (b.contains("x0")) opts.x0 = b["x0"].get<double>();
    if (b.contains("points")) opts.points = b["points"].get<int>();

    Outcome out;
    CsvWriter csv({"class", "x", "ratio", "stderr", "target", "dev"});
    ordered_json verdicts;
    if (b.contains("cases")) {
        for (const auto& c : need(b, "cases")) {
            const ScalarLaw law = law_from_json(need(c, "law"), "/spec/cases/law");
            std::vector<std::string> classes = {"L", "D", "R", "S", "S*", "S_*"};
            if (c.contains("classes")) classes = c["classes"].get<std::vector<std::string>>();
            ordered_json v;
            diag_one_law(c, law, classes, opts, csv, v);
            verdicts[law.describe()] = v;
        }
    } else {
        const ScalarLaw law = law_from_json(need(b, "law"), "/spec/law");
        std::vector<std::string> classes = {"L", "D", "R", "S", "S*", "S_*"};
        if (b.contains("classes")) classes = b["classes"].get<std::vector<std::string>>();
        diag_one_law(b, law, classes, opts, csv, verdicts);
        out.report["law"] = law_to_json(law);
    }
    out.report["verdicts"] = verdicts;
    out.csv = csv.text();
    return out;
}

void diag_one_law(const ordered_json& b, const ScalarLaw& law,
                  const std::vector<std::string>& classes, const DiagnosticOptions& opts,
                  CsvWriter& csv, ordered_json& verdicts) {
    for (const std::string& c : classes) {
        if (c == "L") {
            const double a = b.contains("shift") ? b["shift"].get<double>() : 1.0;
            TrendReport r = long_tail_ratio(law, a, opts);
            trend_rows(csv, law.describe() + " L", r);
            verdicts["L"] = trend_json(r);
        } else if (c == "D") {
            const double bb = b.contains("b") ? b["b"].get<double>() : 0.5;
            TrendReport r = dominated_variation_ratio(law, bb, opts);
            trend_rows(csv, law.describe() + " D", r);
            verdicts["D"] = trend_json(r);
        } else if (c == "R") {
            const double t = b.contains("t") ? b["t"].get<double>() : 2.0;
            TrendReport r = rv_ratio(law, t, std::nullopt, opts);
            trend_rows(csv, law.describe() + " R", r);
            verdicts["R"] = trend_json(r);
        } else if (c == "S") {
            TrendReport r = subexp_ratio(law, opts);
            trend_rows(csv, law.describe() + " S", r);
            verdicts["S"] = trend_json(r);
        } else if (c == "S*") {
            TrendReport r = strong_subexp_ratio(law, opts);
            trend_rows(csv, law.describe() + " S*", r);
            verdicts["S*"] = trend_json(r);
        } else if (c == "S_*") {
            std::vector<double> ug;
            if (b.contains("u_grid")) ug = dvec(b["u_grid"]);
            StronglySubexpReport r = strongly_subexp_ratio(law, ug, opts);
            for (std::size_t i = 0; i < r.u_grid.size(); ++i)
                trend_rows(csv, law.describe() + " S_* u=" + fmt(r.u_grid[i]), r.per_u[i]);
            verdicts["S_*"] = ordered_json{{"verdict", to_string(r.verdict)},
                                           {"uniform_max_dev", r.uniform_max_dev},
                                           {"note", r.note}};
        } else {
            throw ConfigError("/spec/classes", "unknown class tag '" + c + "'");
        }
    }
}

// -------------------------------------------------------------------- maxsum
Outcome run_maxsum(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const VectorLaw a = vector_law_from_json(need(b, "vector_law_1"), "/spec/vector_law_1");
    const VectorLaw l2 = vector_law_from_json(need(b, "vector_law_2"), "/spec/vector_law_2");
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const EngineConfig eng = cfg.engine.engine(0x30);
    TrendReport r = maxsum_ratio(a, l2, set, dvec(need(b, "x_grid")), eng);
    Outcome out;
    CsvWriter csv({"tag", "x", "ratio", "stderr", "target", "dev"});
    trend_rows(csv, "maxsum", r);
    out.report["verdicts"] = ordered_json{{"maxsum", trend_json(r)}};
    out.csv = csv.text();
    if (r.grid.empty()) out.exit_code = 3;
    return out;
}

// --------------------------------------------------------------------- nfold
Outcome run_nfold(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const VectorLaw law = vector_law_from_json(need(b, "vector_law"), "/spec/vector_law");
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const int n = need(b, "n").get<int>();
    const EngineConfig eng = cfg.engine.engine(0x30);
    TrendReport r = nfold_ratio(law, set, n, dvec(need(b, "x_grid")), eng);
    Outcome out;
    CsvWriter csv({"tag", "x", "ratio", "stderr", "target", "dev"});
    trend_rows(csv, "nfold", r);
    out.report["verdicts"] = ordered_json{{"nfold", trend_json(r)}};
    out.report["n"] = n;
    out.csv = csv.text();
    if (r.grid.empty()) out.exit_code = 3;
    return out;
}

// -------------------------------------------------------------------- kesten
Outcome run_kesten(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const VectorLaw law = vector_law_from_json(need(b, "vector_law"), "/spec/vector_law");
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const EngineConfig eng = cfg.engine.engine(0x31);
    const KestenTable t = kesten_table(law, set, need(b, "c").get<double>(),
                                       need(b, "n_max").get<int>(), dvec(need(b, "x_mults")), eng);
    Outcome out;
    CsvWriter csv({"n", "x", "ratio", "ratio_stderr", "denom", "k_value"});
    for (const auto& row : t.rows)
        csv.row({fmt(row.n), fmt(row.x), fmt(row.ratio), fmt(row.ratio_se), fmt(row.denom),
                 fmt(row.k_value)});
    out.report["verdicts"] =
        ordered_json{{"kesten", ordered_json{{"bounded", t.bounded},
                                             {"sup_k", t.sup_k},
                                             {"mu_fa", t.mu_fa},
                                             {"c", t.c}}}};
    out.csv = csv.text();
    return out;
}

// --------------------------------------------------------------- stopped_sum
Outcome run_stopped_sum(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    StoppedSumModel model{vector_law_from_json(need(b, "vector_law"), "/spec/vector_law"),
                          law_from_json(need(b, "tau"), "/spec/tau")};
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const EngineConfig eng = cfg.engine.engine(0x32);
    const std::vector<double> x_grid = dvec(need(b, "x_grid"));
    const BigJumpReport r = single_big_jump_report(model, set, x_grid, eng);

    Outcome out;
    CsvWriter csv({"tag", "x", "ratio", "stderr", "target", "dev"});
    trend_rows(csv, "big_jump", r.main);
    trend_rows(csv, "condition", r.condition);
    ordered_json verdicts{{"big_jump", trend_json(r.main)},
                          {"condition", trend_json(r.condition)},
                          {"condition_ok", r.condition_ok},
                          {"expected_tau", r.expected_tau},
                          {"c", r.c}};
    if (model.vlaw.kind() == VectorKind::Mrv && model.vlaw.alpha() > 1.0) {
        ordered_json cross = ordered_json::array();
        for (double x : x_grid) {
            const double cf = mrv_stopped_closed_form(model, set, x);
            const Estimate est = stopped_sum_tail(model, set, x, eng);
            cross.push_back(ordered_json{{"x", x},
                                         {"closed_form", cf},
                                         {"estimate", estimate_json(est)},
                                         {"in_ci", est.ci_lo <= cf && cf <= est.ci_hi}});
        }
        verdicts["mrv_closed_form"] = cross;
    }
    out.report["verdicts"] = verdicts;
    out.csv = csv.text();
    if (r.main.grid.empty()) out.exit_code = 3;
    return out;
}

// ----------------------------------------------------------------- pld_fixed
void surface_rows(CsvWriter& csv, const Surface& s) {
    for (const auto& c : s.cells)
        csv.row({fmt(c.n_or_lambda), fmt(c.x), fmt(c.threshold), fmt(c.sum_tail.value),
                 fmt(c.sum_tail.std_error), fmt(c.target), fmt(c.ratio), fmt(c.sum_tail.ci_lo),
                 fmt(c.sum_tail.ci_hi), to_string(c.sum_tail.method),
                 c.reachable ? "1" : "0"});
}

ordered_json surface_json(const Surface& s) {
    long unreachable = 0;
    for (const auto& c : s.cells) unreachable += c.reachable ? 0 : 1;
    return ordered_json{{"max_dev", s.max_dev},
                        {"max_dev_by_mult", s.max_dev_by_mult},
                        {"mu_fa", s.mu_fa},
                        {"gamma", s.gamma},
                        {"cells", s.cells.size()},
                        {"unreachable", unreachable}};
}

Outcome run_pld_fixed(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const VectorLaw law = vector_law_from_json(need(b, "vector_law"), "/spec/vector_law");
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const EngineConfig eng = cfg.engine.engine(0x40);
    const Surface s = pld_fixed_n_surface(law, set, need(b, "n_list").get<std::vector<int>>(),
                                          dvec(need(b, "x_mults")), eng);
    Outcome out;
    CsvWriter csv({"n", "x", "threshold", "estimate", "stderr", "target", "ratio", "ci_lo",
                   "ci_hi", "method", "reachable"});
    surface_rows(csv, s);
    out.report["verdicts"] = ordered_json{{"surface", surface_json(s)}};
    out.csv = csv.text();
    bool any_reachable = false;
    for (const auto& c : s.cells) any_reachable = any_reachable || c.reachable;
    if (!any_reachable) out.exit_code = 3;
    return out;
}

// ---------------------------------------------------------------- pld_random
Outcome run_pld_random(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const VectorLaw law = vector_law_from_json(need(b, "vector_law"), "/spec/vector_law");
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const CountingProcess cp = arrivals_from_json(need(b, "arrivals"), "/spec/arrivals");
    const EngineConfig eng = cfg.engine.engine(0x40);
    const std::vector<double> t_list = dvec(need(b, "t_list"));

    ordered_json verdicts;
    if (b.contains("check_assumptions") && b["check_assumptions"].get<bool>()) {
        const LlnReport lln = check_lln(cp, t_list, {}, 4000, eng);
        verdicts["lln"] = ordered_json{{"verdict", to_string(lln.verdict)}};
        // epsilon below the rate-1 Poisson boundary at delta = 0.5
        TrendReport lt = light_tail_trend(cp, t_list, 0.5, 0.05, 4096, 4000, eng);
        verdicts["light_tail"] = trend_json(lt);
    }
    const Surface s = pld_random_surface(law, cp, set, t_list, dvec(need(b, "x_mults")), eng);
    Outcome out;
    CsvWriter csv({"t", "x", "threshold", "estimate", "stderr", "target", "ratio", "ci_lo",
                   "ci_hi", "method", "reachable"});
    surface_rows(csv, s);
    verdicts["surface"] = surface_json(s);
    out.report["verdicts"] = verdicts;
    out.csv = csv.text();
    bool any_reachable = false;
    for (const auto& c : s.cells) any_reachable = any_reachable || c.reachable;
    if (!any_reachable) out.exit_code = 3;
    return out;
}

// ------------------------------------------------------------ entrance, ruin
RiskModel risk_from_json(const ordered_json& b) {
    const ordered_json& r = need(b, "risk");
    RiskModel m{dvec(need(r, "allocation")),
                dvec(need(r, "premium_caps")),
                need(r, "interest").get<double>(),
                vector_law_from_json(need(r, "claims"), "/spec/risk/claims"),
                arrivals_from_json(need(r, "arrivals"), "/spec/risk/arrivals"),
                need(r, "horizon").get<double>()};
    m.validate();
    return m;
}

Outcome run_entrance(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const RiskModel model = risk_from_json(b);
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const EngineConfig eng = cfg.engine.engine(0x50);
    Outcome out;
    CsvWriter csv({"t", "x", "estimate", "stderr", "ci_lo", "ci_hi", "asymptote", "ratio",
                   "method"});
    ordered_json rows = ordered_json::array();
    bool all_zero = true;
    for (double t : dvec(need(b, "t_list"))) {
        for (double x : dvec(need(b, "x_list"))) {
            const Estimate e = entrance_probability(model, set, x, t, eng);
            const double asym = theorem61_asymptote(model, set, x, t, eng);
            const double ratio = asym > 0.0 ? e.value / asym : 0.0;
            all_zero = all_zero && e.zero_hit;
            csv.row({fmt(t), fmt(x), fmt(e.value), fmt(e.std_error), fmt(e.ci_lo), fmt(e.ci_hi),
                     fmt(asym), fmt(ratio), to_string(e.method)});
            rows.push_back(ordered_json{{"t", t},
                                        {"x", x},
                                        {"estimate", estimate_json(e)},
                                        {"asymptote", asym},
                                        {"ratio", ratio}});
        }
    }
    out.report["rows"] = rows;
    out.csv = csv.text();
    if (all_zero) out.exit_code = 3;
    return out;
}

Outcome run_ruin(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const RiskModel model = risk_from_json(b);
    const std::string rk = need(b, "ruin_kind").get<std::string>();
    if (rk != "sum_negative" && rk != "any_negative")
        throw ConfigError("/spec/ruin_kind", "expected sum_negative or any_negative");
    const RuinSetKind kind =
        rk == "sum_negative" ? RuinSetKind::SumNegative : RuinSetKind::AnyNegative;
    const RareSet set = RareSet::ruin_translate(model.allocation, kind);
    const EngineConfig eng = cfg.engine.engine(0x51);
    const long coupled_n =
        b.contains("coupled_check_n") ? b["coupled_check_n"].get<long>() : 200'000;

    Outcome out;
    CsvWriter csv({"t", "x", "psi", "stderr", "ci_lo", "ci_hi", "asymptote", "ratio",
                   "entrance", "ordering_held"});
    ordered_json rows = ordered_json::array();
    bool all_zero = true, ordering = true;
    for (double t : dvec(need(b, "t_list"))) {
        for (double x : dvec(need(b, "x_list"))) {
            const Estimate psi = ruin_probability(model, kind, x, t, eng);
            const double asym = theorem61_asymptote(model, set, x, t, eng);
            const CoupledRuinCheck chk = coupled_ruin_entrance(model, kind, x, t, coupled_n, eng);
            ordering = ordering && chk.ordering_held;
            all_zero = all_zero && psi.zero_hit;
            const double ratio = asym > 0.0 ? psi.value / asym : 0.0;
            csv.row({fmt(t), fmt(x), fmt(psi.value), fmt(psi.std_error), fmt(psi.ci_lo),
                     fmt(psi.ci_hi), fmt(asym), fmt(ratio), fmt(chk.entrance.value),
                     chk.ordering_held ? "1" : "0"});
            rows.push_back(ordered_json{{"t", t},
                                        {"x", x},
                                        {"psi", estimate_json(psi)},
                                        {"asymptote", asym},
                                        {"ratio", ratio},
                                        {"entrance", estimate_json(chk.entrance)},
                                        {"ordering_held", chk.ordering_held}});
        }
    }
    out.report["rows"] = rows;
    out.report["verdicts"] = ordered_json{{"ordering_held", ordering}};
    out.csv = csv.text();
    if (all_zero) out.exit_code = 3;
    return out;
}

// -------------------------------------------------------------- assumption62
Outcome run_assumption62(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const RiskModel model = risk_from_json(b);
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const EngineConfig eng = cfg.engine.engine(0x52);
    const long budget = b.contains("budget") ? b["budget"].get<long>() : 200'000;
    const Assumption62Report r =
        check_assumption_62(model, set, need(b, "c").get<double>(),
                            need(b, "t_star").get<double>(), need(b, "n_cap").get<int>(),
                            budget, eng);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < r.terms_659.size(); ++i)
        max_diff = std::max(max_diff, std::abs(r.terms_659[i] - r.terms_660[i]));
    Outcome out;
    CsvWriter csv({"n", "term_659", "term_660"});
    for (std::size_t i = 0; i < r.terms_659.size(); ++i)
        csv.row({fmt(static_cast<double>(i)), fmt(r.terms_659[i]), fmt(r.terms_660[i])});
    out.report["verdicts"] =
        ordered_json{{"assumption62", ordered_json{{"summable", r.summable},
                                                   {"partial_sum", r.partial_sum},
                                                   {"tail_ratio", r.tail_ratio},
                                                   {"remainder", r.remainder},
                                                   {"eq659_eq660_max_diff", max_diff},
                                                   {"c", r.c}}}};
    out.csv = csv.text();
    return out;
}

// ------------------------------------------------------- weighted_uniformity
Outcome run_weighted(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    const VectorLaw law = vector_law_from_json(need(b, "vector_law"), "/spec/vector_law");
    const RareSet set = set_from_json(need(b, "set"), "/spec/set");
    const EngineConfig eng = cfg.engine.engine(0x53);
    const WeightedUniformityReport r = weighted_sum_uniformity(
        law, set, need(b, "n").get<int>(), need(b, "a").get<double>(),
        need(b, "b").get<double>(),
        b.contains("coeff_samples") ? b["coeff_samples"].get<int>() : 8,
        dvec(need(b, "x_grid")), eng);
    Outcome out;
    CsvWriter csv({"draw", "x", "ratio", "stderr"});
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        csv.row({fmt(static_cast<double>(i)), fmt(r.rows[i].x), fmt(r.rows[i].ratio),
                 fmt(r.rows[i].ratio_se)});
    out.report["verdicts"] =
        ordered_json{{"weighted_uniformity", ordered_json{{"verdict", to_string(r.verdict)},
                                                          {"max_dev", r.max_dev}}}};
    out.csv = csv.text();
    if (r.rows.empty()) out.exit_code = 3;
    return out;
}

}  // namespace

void validate_experiment(const ExperimentConfig& cfg) {
    const ordered_json& b = cfg.body;
    auto maybe_set = [&] {
        if (b.contains("set")) set_from_json(b["set"], "/spec/set");
    };
    if (cfg.experiment == "class_diag") {
        if (b.contains("cases"))
            for (const auto& c : b["cases"]) law_from_json(need(c, "law"), "/spec/cases/law");
        else
            law_from_json(need(b, "law"), "/spec/law");
    } else if (cfg.experiment == "maxsum") {
        vector_law_from_json(need(b, "vector_law_1"), "/spec/vector_law_1");
        vector_law_from_json(need(b, "vector_law_2"), "/spec/vector_law_2");
        maybe_set();
        dvec(need(b, "x_grid"));
    } else if (cfg.experiment == "entrance" || cfg.experiment == "ruin" ||
               cfg.experiment == "assumption62") {
        risk_from_json(b);
        maybe_set();
        if (cfg.experiment == "ruin") {
            const std::string rk = need(b, "ruin_kind").get<std::string>();
            if (rk != "sum_negative" && rk != "any_negative")
                throw ConfigError("/spec/ruin_kind", "expected sum_negative or any_negative");
        }
    } else {
        if (b.contains("vector_law")) vector_law_from_json(b["vector_law"], "/spec/vector_law");
        if (b.contains("tau")) law_from_json(b["tau"], "/spec/tau");
        if (b.contains("arrivals")) arrivals_from_json(b["arrivals"], "/spec/arrivals");
        maybe_set();
    }
}

int run_experiment(const ExperimentConfig& cfg) {
    Outcome out;
    try {
        if (cfg.experiment == "class_diag") out = run_class_diag(cfg);
        else if (cfg.experiment == "maxsum") out = run_maxsum(cfg);
        else if (cfg.experiment == "nfold") out = run_nfold(cfg);
        else if (cfg.experiment == "kesten") out = run_kesten(cfg);
        else if (cfg.experiment == "stopped_sum") out = run_stopped_sum(cfg);
        else if (cfg.experiment == "pld_fixed") out = run_pld_fixed(cfg);
        else if (cfg.experiment == "pld_random") out = run_pld_random(cfg);
        else if (cfg.experiment == "entrance") out = run_entrance(cfg);
        else if (cfg.experiment == "ruin") out = run_ruin(cfg);
        else if (cfg.experiment == "assumption62") out = run_assumption62(cfg);
        else if (cfg.experiment == "weighted_uniformity") out = run_weighted(cfg);
        else throw ConfigError("/experiment", "unknown experiment");
    } catch (const ConfigError&) {
        throw;  // schema problems belong to the caller (exit 1)
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "precondition error: %s\n", e.what());
        return 2;
    } catch (const InfMeanError& e) {
        std::fprintf(stderr, "precondition error: %s\n", e.what());
        return 2;
    }

    ordered_json report;
    report["experiment"] = cfg.experiment;
    report["version"] = RARETAIL_VERSION;
    report["git_revision"] = RARETAIL_GIT_REV;
    report["seed"] = cfg.engine.seed;
    report["config_hash"] = config_hash(cfg.raw.is_null() ? serialize_config(cfg) : cfg.raw);
    for (auto& item : out.report.items()) report[item.key()] = item.value();
    report["exit_code"] = out.exit_code;

    std::filesystem::create_directories(cfg.output_dir);
    {
        std::ofstream f(cfg.output_dir + "/report.json");
        f << report.dump(2) << '\n';
    }
    {
        std::ofstream f(cfg.output_dir + "/data.csv");
        f << out.csv;
    }
    return out.exit_code;
}

}  // namespace raretail
