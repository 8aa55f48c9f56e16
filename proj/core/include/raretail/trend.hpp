#pragma once

#include <string>
#include <vector>

namespace raretail {

enum class Verdict { Consistent, Inconsistent, Inconclusive };

const char* to_string(Verdict v);

// A limit statement turned into a finite diagnostic: ratios along a grid,
// judged on the last k points. Deterministic reports have empty stderrs;
// Monte Carlo reports carry one stderr per point and the classification
// accounts for the CI slack.
struct TrendReport {
    std::vector<double> grid;
    std::vector<double> ratios;
    std::vector<double> stderrs;
    double target = 1.0;
    Verdict verdict = Verdict::Inconclusive;
    double max_dev_last_k = 0.0;
    int last_k = 3;
    std::string note;
};

struct TrendOptions {
    int last_k = 3;
    double tol = 0.05;
    bool require_monotone = true;
    double z = 1.96;  // CI multiplier for stochastic slack
};

// Fills verdict/max_dev_last_k of a report whose grid/ratios/target are set.
// Deviation is |ratio - target| / |target| (absolute when target == 0).
// Consistent requires every last-k deviation within tol and deviations
// non-increasing (up to CI slack); confidently violated points give
// Inconsistent; anything else is Inconclusive.
void classify_trend(TrendReport& report, const TrendOptions& opts);

// Boundedness rule for dominated variation: the last k ratios must agree to
// within spread_tol of each other.
void classify_bounded(TrendReport& report, int last_k, double spread_tol);

}  // namespace raretail
