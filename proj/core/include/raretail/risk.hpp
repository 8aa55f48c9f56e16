#pragma once

#include "raretail/counting.hpp"
#include "raretail/large_dev.hpp"
#include "raretail/rare_set.hpp"
#include "raretail/vector_law.hpp"

namespace raretail {

// Multivariate risk model with a common (not necessarily renewal) claim
// arrival process, constant interest force and capped premium densities
// (constant at the cap). Initial capital x is allocated by `allocation`.
struct RiskModel {
    std::vector<double> allocation;   // l_i > 0, sums to 1
    std::vector<double> premium_caps; // Lambda_i >= 0, density p_i(t) = Lambda_i
    double interest = 0.0;            // r >= 0
    VectorLaw claims;
    CountingProcess arrivals;
    double horizon = 0.0;             // T

    int dim() const { return claims.dim(); }
    void validate() const;
};

// int_0^t p_i(y) e^{-ry} dy per line.
std::vector<double> premium_integral(const RiskModel& model, double t);

// One draw of the discounted aggregate claims D_r(t).
std::vector<double> discounted_claims(const RiskModel& model, double t, RngStream& rng);

// Paths for the engine: discounted aggregate statistic, and the ruin
// statistic (running max of Y_A(D_r(s) - premiums(s)) over claim epochs;
// between claims the surplus only grows, so epochs are exact).
PathFactory discounted_claims_path(const RiskModel& model, const RareSet& set, double t);
PathFactory ruin_path(const RiskModel& model, const RareSet& set, double t);

// P[D_r(t) in xA]; at r = 0 this couples path for path with
// random_sum_tail under the same engine config.
Estimate entrance_probability(const RiskModel& model, const RareSet& set, double x, double t,
                              const EngineConfig& cfg);

// int_0^t P[X in x e^{rs} A] lambda(ds): analytic lambda density for the
// Poisson process, step sum for deterministic arrivals, Monte Carlo
// lambda-table otherwise; the F_A curve itself is analytic when fa_tail is,
// else interpolated from estimates on a log grid.
double theorem61_asymptote(const RiskModel& model, const RareSet& set, double x, double t,
                           const EngineConfig& cfg);

// Finite-horizon ruin probability for the translate set A = l - L.
Estimate ruin_probability(const RiskModel& model, RuinSetKind kind, double x, double t,
                          const EngineConfig& cfg);

// Both statistics from the same crude paths: the entrance indicator can
// never be smaller than the ruin indicator, so the estimates preserve
// psi <= P[D_r(t) in xA] exactly, run by run.
struct CoupledRuinCheck {
    Estimate ruin;
    Estimate entrance;
    bool ordering_held = false;  // pathwise ruin => entrance on every path
};
CoupledRuinCheck coupled_ruin_entrance(const RiskModel& model, RuinSetKind kind, double x,
                                       double t, long n, const EngineConfig& cfg);

// mu(A) V(x) int_0^t e^{-alpha r s} lambda(ds) for MRV claims, alpha > 1.
double mrv_risk_closed_form(const RiskModel& model, const RareSet& set, double x, double t,
                            const EngineConfig& cfg);

// Assumption on the delayed process: sum_n P[N*(t) >= n-1] / P[X in c n A].
struct Assumption62Report {
    std::vector<double> terms_659;
    std::vector<double> terms_660;
    double partial_sum = 0.0;
    double tail_ratio = 0.0;  // geometric ratio fitted on the last terms
    double remainder = 0.0;
    bool summable = false;
    double c = 0.0;
};
Assumption62Report check_assumption_62(const RiskModel& model, const RareSet& set, double c,
                                       double t_star, int n_cap, long budget,
                                       const EngineConfig& cfg);

// P[sum_i c_i X^(i) in xA] / sum_i P[c_i X^(i) in xA] for coefficient draws
// in [a,b]^n plus the two corners; the summary is the worst deviation at the
// grid tail across draws.
struct WeightedUniformityReport {
    struct Row {
        std::vector<double> coeffs;
        double x;
        double ratio;
        double ratio_se;
    };
    std::vector<Row> rows;
    double max_dev = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};
WeightedUniformityReport weighted_sum_uniformity(const VectorLaw& law, const RareSet& set,
                                                 int n, double a, double b, int coeff_samples,
                                                 const std::vector<double>& x_grid,
                                                 const EngineConfig& cfg);

}  // namespace raretail
