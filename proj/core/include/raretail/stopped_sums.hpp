#pragma once

#include <vector>

#include "raretail/trend.hpp"
#include "raretail/vector_law.hpp"

namespace raretail {

struct TauOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct KestenPreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Randomly stopped sum S_tau = sum_{i<=tau} X^(i), tau independent of the
// X's. tau must be supported on {0,1,2,...}: Geometric and integer
// Degenerate laws are exact; other laws are floored when sampled.
struct StoppedSumModel {
    VectorLaw vlaw;
    ScalarLaw tau;
};

// F_A of the law is treated as long-tailed when every ingredient law is;
// the convolution trend ops reject inputs without the tag.
bool fa_long_tailed(const VectorLaw& law);

// Paths for the splitting engine. One step per vector draw; the random-sum
// variant interleaves arrival draws so that degenerate inter-arrivals
// reproduce the fixed-n path draw for draw.
PathFactory fixed_sum_path(const VectorLaw& law, const RareSet& set, int n);
PathFactory stopped_sum_path(const StoppedSumModel& model, const RareSet& set);
PathFactory two_law_sum_path(const VectorLaw& a, const VectorLaw& b, const RareSet& set);

// P[X^(1) + X^(2) in xA] for independent draws of the two laws.
Estimate convolution_tail_over_set(const VectorLaw& a, const VectorLaw& b, const RareSet& set,
                                   double x, const EngineConfig& cfg);

// P[S_n in xA] with a deterministic per-cell stream salt shared with the
// random-sum machinery (the reduction identity depends on it).
Estimate nfold_tail(const VectorLaw& law, const RareSet& set, int n, double x,
                    const EngineConfig& cfg);

// P[X1+X2 in xA] / (P[X1 in xA] + P[X2 in xA]) -> 1 (max-sum equivalence)
TrendReport maxsum_ratio(const VectorLaw& a, const VectorLaw& b, const RareSet& set,
                         const std::vector<double>& x_grid, const EngineConfig& cfg);

// P[S_n in xA] / (n P[X in xA]) -> 1
TrendReport nfold_ratio(const VectorLaw& law, const RareSet& set, int n,
                        const std::vector<double>& x_grid, const EngineConfig& cfg);

// Empirical Kesten-type table: K_n(x) = P[S_n in xA]/P[X in xA] * P[X in cnA]
// for n <= n_max, x = mult * h_inv[n(mu+1)] (the asymptotic-regime grid).
// Bounded verdict: the per-n sup shows no growth across the top three n.
struct KestenTable {
    struct Row {
        int n;
        double x;
        double ratio;
        double ratio_se;
        double denom;  // P[X in c n A]
        double k_value;
    };
    std::vector<Row> rows;
    std::vector<double> per_n_sup;
    std::vector<int> n_values;
    double sup_k = 0.0;
    double c = 0.0;
    double mu_fa = 0.0;
    bool bounded = false;
};
KestenTable kesten_table(const VectorLaw& law, const RareSet& set, double c, int n_max,
                         const std::vector<double>& x_mults, const EngineConfig& cfg);

Estimate stopped_sum_tail(const StoppedSumModel& model, const RareSet& set, double x,
                          const EngineConfig& cfg);

// Single-big-jump diagnostics: the main trend P[S_tau in xA]/(E[tau] P[X in xA])
// against 1, plus the side condition P[c tau > x] = o(P[X in xA]) with
// c = mu_{F_A} + 1.
struct BigJumpReport {
    TrendReport main;
    TrendReport condition;
    bool condition_ok = false;
    double expected_tau = 0.0;
    double c = 0.0;
};
BigJumpReport single_big_jump_report(const StoppedSumModel& model, const RareSet& set,
                                     const std::vector<double>& x_grid,
                                     const EngineConfig& cfg);

// E[tau] mu(A) V(x) for MRV summands with alpha > 1.
double mrv_stopped_closed_form(const StoppedSumModel& model, const RareSet& set, double x);

// stderr of a ratio of independent estimates
double ratio_std_error(double num, double num_se, double den, double den_se);

}  // namespace raretail
