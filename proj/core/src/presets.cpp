#include "raretail/experiment.hpp"

namespace raretail {

namespace {

ordered_json pareto(double alpha, double xm) {
    return ordered_json{{"family", "pareto"}, {"params", {{"alpha", alpha}, {"xm", xm}}}};
}
ordered_json geometric(double p) {
    return ordered_json{{"family", "geometric"}, {"params", {{"p", p}}}};
}
ordered_json indep2(double alpha, double xm) {
    return ordered_json{{"kind", "independent"},
                        {"marginals", ordered_json::array({pareto(alpha, xm), pareto(alpha, xm)})}};
}
ordered_json mrv2(double alpha) {
    return ordered_json{{"kind", "mrv"},
                        {"dim", 2},
                        {"alpha", alpha},
                        {"radial", pareto(alpha, 1.0)},
                        {"axis_weights", ordered_json::array({0.5, 0.5})},
                        {"diag_weight", 0.0}};
}
ordered_json halfspace_half() {
    return ordered_json{{"kind", "halfspace"},
                        {"weights", ordered_json::array({0.5, 0.5})},
                        {"c", 1.0}};
}
ordered_json engine(long n_per_level, int replicates = 10, long pilot = 4000) {
    return ordered_json{{"seed", 20240801},
                        {"n_per_level", n_per_level},
                        {"replicates", replicates},
                        {"pilot_n", pilot}};
}
ordered_json doc(const char* experiment, ordered_json eng, ordered_json spec) {
    return ordered_json{{"experiment", experiment},
                        {"engine", std::move(eng)},
                        {"output_dir", "out"},
                        {"spec", std::move(spec)}};
}

struct PresetDef {
    Preset meta;
    ordered_json config;
};

std::vector<PresetDef> build_presets() {
    std::vector<PresetDef> out;

    out.push_back({{"class_diag_chain",
                    "tail-class trend verdicts for Pareto(2.5), Exponential(1), Weibull(0.5)"},
                   doc("class_diag", engine(0),
                       ordered_json{{"cases",
                                     ordered_json::array(
                                         {ordered_json{{"law", pareto(2.5, 1.0)},
                                                       {"classes", {"L", "D", "R", "S", "S*", "S_*"}}},
                                          ordered_json{{"law",
                                                        ordered_json{{"family", "exponential"},
                                                                     {"params", {{"rate", 1.0}}}}},
                                                       {"classes", {"L"}}},
                                          ordered_json{{"law",
                                                        ordered_json{{"family", "weibull"},
                                                                     {"params",
                                                                      {{"shape", 0.5},
                                                                       {"scale", 1.0}}}}},
                                                       {"classes", {"D", "S*"}}}})}})});

    out.push_back({{"s_star_ratio",
                    "strong-subexponential integral ratio for Pareto(2.5) on the deep grid"},
                   doc("class_diag", engine(0),
                       ordered_json{{"law", pareto(2.5, 1.0)}, {"classes", {"S*"}}})});

    out.push_back(
        {{"single_big_jump",
          "geometric stopped sum over a half-space set vs E[tau] times the single tail"},
         doc("stopped_sum", engine(25000),
             ordered_json{{"vector_law", indep2(2.0, 1.0)},
                          {"set", halfspace_half()},
                          {"tau", geometric(0.5)},
                          {"x_grid", {7.0711, 12.9099, 22.3607, 31.6228}}})});

    out.push_back({{"kesten_bound",
                    "uniform-in-n bound table for n-fold tail ratios, c above the projection mean"},
                   doc("kesten", engine(20000),
                       ordered_json{{"vector_law", indep2(2.0, 1.0)},
                                    {"set", halfspace_half()},
                                    {"c", 3.0},
                                    {"n_max", 30},
                                    {"x_mults", {1.0, 2.0, 4.0}}})});

    out.push_back({{"th5_1_surface",
                    "fixed-n large-deviation ratio surface above the insensitivity thresholds"},
                   doc("pld_fixed", engine(40000, 10, 20000),
                       ordered_json{{"vector_law", indep2(2.0, 0.03)},
                                    {"set", halfspace_half()},
                                    {"n_list", {2, 5, 10}},
                                    {"x_mults", {1.0, 2.0, 4.0}}})});

    out.push_back({{"th5_2_random",
                    "random-sum large-deviation surface for Poisson arrivals with LLN and "
                    "light-tail checks"},
                   doc("pld_random", engine(40000, 10, 20000),
                       ordered_json{{"vector_law", indep2(2.0, 0.03)},
                                    {"set", halfspace_half()},
                                    {"arrivals", {{"kind", "poisson"}, {"rate", 1.0}}},
                                    {"t_list", {10.0}},
                                    {"x_mults", {1.0, 2.0, 4.0}},
                                    {"check_assumptions", true}})});

    out.push_back({{"cor4_1_mrv",
                    "stopped-sum closed form E[tau] mu(A) V(x) cross-checked against splitting"},
                   doc("stopped_sum", engine(25000),
                       ordered_json{{"vector_law", mrv2(2.0)},
                                    {"set", halfspace_half()},
                                    {"tau", geometric(0.5)},
                                    {"x_grid", {50.0, 100.0, 200.0}}})});

    out.push_back({{"th6_1_entrance",
                    "discounted aggregate claims entering a half-space set vs the arrival-measure "
                    "integral"},
                   doc("entrance", engine(25000),
                       ordered_json{{"risk",
                                     ordered_json{{"allocation", {0.5, 0.5}},
                                                  {"premium_caps", {0.5, 0.5}},
                                                  {"interest", 0.05},
                                                  {"horizon", 10.0},
                                                  {"claims", indep2(2.0, 1.0)},
                                                  {"arrivals", {{"kind", "poisson"}, {"rate", 1.0}}}}},
                                    {"set", halfspace_half()},
                                    {"t_list", {5.0, 10.0}},
                                    {"x_list", {45.28, 57.06}}})});

    out.push_back({{"cor6_1_ruin",
                    "finite-horizon ruin probability for the sum-negative ruin set vs the same "
                    "integral"},
                   doc("ruin", engine(25000),
                       ordered_json{{"risk",
                                     ordered_json{{"allocation", {0.5, 0.5}},
                                                  {"premium_caps", {0.5, 0.5}},
                                                  {"interest", 0.05},
                                                  {"horizon", 10.0},
                                                  {"claims", indep2(2.0, 1.0)},
                                                  {"arrivals", {{"kind", "poisson"}, {"rate", 1.0}}}}},
                                    {"ruin_kind", "sum_negative"},
                                    {"t_list", {5.0, 10.0}},
                                    {"x_list", {45.28, 57.06}},
                                    {"coupled_check_n", 200000}})});

    out.push_back({{"assumption62",
                    "delayed-count summability against the scaled set tails, with the two "
                    "equivalent numerators"},
                   doc("assumption62", engine(20000),
                       ordered_json{{"risk",
                                     ordered_json{{"allocation", {0.5, 0.5}},
                                                  {"premium_caps", {0.5, 0.5}},
                                                  {"interest", 0.05},
                                                  {"horizon", 10.0},
                                                  {"claims", indep2(2.0, 1.0)},
                                                  {"arrivals", {{"kind", "poisson"}, {"rate", 1.0}}}}},
                                    {"set", halfspace_half()},
                                    {"c", 3.0},
                                    {"t_star", 10.0},
                                    {"n_cap", 60},
                                    {"budget", 200000}})});

    out.push_back({{"maxsum_equivalence",
                    "two-law convolution tail over the set vs the sum of single tails"},
                   doc("maxsum", engine(20000),
                       ordered_json{{"vector_law_1", indep2(2.0, 1.0)},
                                    {"vector_law_2", indep2(2.0, 1.0)},
                                    {"set", halfspace_half()},
                                    {"x_grid", {45.0, 90.0, 180.0, 360.0}}})});

    out.push_back({{"lemma6_1_weighted",
                    "weighted-sum tails over discount-range coefficients vs the sum of scaled "
                    "singles"},
                   doc("weighted_uniformity", engine(20000),
                       ordered_json{{"vector_law", indep2(2.0, 1.0)},
                                    {"set", halfspace_half()},
                                    {"n", 3},
                                    {"a", 0.60653},
                                    {"b", 1.0},
                                    {"coeff_samples", 8},
                                    {"x_grid", {22.3607, 45.0, 90.0}}})});
    return out;
}

const std::vector<PresetDef>& presets() {
    static const std::vector<PresetDef> p = build_presets();
    return p;
}

}  // namespace

const std::vector<Preset>& list_presets() {
    static const std::vector<Preset> metas = [] {
        std::vector<Preset> m;
        for (const auto& p : presets()) m.push_back(p.meta);
        return m;
    }();
    return metas;
}

ordered_json preset_config(const std::string& name) {
    for (const auto& p : presets())
        if (p.meta.name == name) return p.config;
    throw ConfigError("/preset", "unknown preset '" + name + "'");
}

}  // namespace raretail
