#pragma once

#include <functional>
#include <string>
#include <vector>

#include "raretail/engine.hpp"
#include "raretail/scalar_law.hpp"
#include "raretail/trend.hpp"

namespace raretail {

struct ArrivalOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Counting process built from independent, not necessarily identically
// distributed positive inter-arrival times: N(t) = sup{ n : theta_1 + ... +
// theta_n <= t }. The i-th inter-arrival law is law(i), 1-based.
class CountingProcess {
  public:
    using LawFn = std::function<ScalarLaw(long)>;

    static CountingProcess renewal(const ScalarLaw& inter, std::string label = "");
    static CountingProcess poisson(double rate);          // analytic lambda(t) = rate t
    static CountingProcess deterministic(double spacing); // analytic lambda(t) = floor(t/spacing)
    static CountingProcess cycling(std::vector<ScalarLaw> pattern, std::string label = "");

    ScalarLaw law(long i) const { return law_(i); }
    const std::string& label() const { return label_; }
    bool has_analytic_lambda() const { return static_cast<bool>(analytic_lambda_); }
    double analytic_lambda(double t) const { return analytic_lambda_(t); }
    bool iid() const { return iid_; }

    // The process with theta_1 dropped: tau*_n = theta_2 + ... + theta_{n+1}.
    CountingProcess delayed() const;

  private:
    LawFn law_;
    std::function<double(double)> analytic_lambda_;
    std::string label_;
    bool iid_ = false;
};

struct CountingSample {
    long count = 0;
    std::vector<double> epochs;
};

// Draw arrivals until the clock passes t; guard at 1e7 arrivals.
CountingSample simulate_counting(const CountingProcess& cp, double t, RngStream& rng);

// Arrival count only, stopping early at `cap` (for histogram tails where the
// full path is not needed and pathological processes must not run away).
long simulate_count_capped(const CountingProcess& cp, double t, RngStream& rng, long cap);

// lambda(t) = E[N(t)]: analytic when the process knows it, Monte Carlo mean
// otherwise.
struct MeanEstimate2 {
    double value = 0.0;
    double std_error = 0.0;
    long n = 0;
    bool analytic = false;
};
MeanEstimate2 lambda_mean(const CountingProcess& cp, double t, long budget,
                          const EngineConfig& cfg);

// P[|N(t)/lambda(t) - 1| > delta] along t_grid, per delta; Consistent iff the
// probabilities shrink toward zero.
struct LlnReport {
    std::vector<double> deltas;
    std::vector<TrendReport> per_delta;
    Verdict verdict = Verdict::Inconclusive;
};
LlnReport check_lln(const CountingProcess& cp, const std::vector<double>& t_grid,
                    std::vector<double> deltas, long budget, const EngineConfig& cfg);

// sum_{n > floor((1+delta) lambda(t))} (1+eps)^n P[N(t) = n]: exact for the
// Poisson and deterministic processes, Monte Carlo histogram with a
// ratio-test remainder otherwise.
struct LightTailResult {
    double value = 0.0;
    double remainder = 0.0;
    long cutoff = 0;
    bool analytic = false;
    bool ok = true;  // false when the histogram cannot resolve the sum
};
LightTailResult check_light_tail(const CountingProcess& cp, double t, double delta, double eps,
                                 long n_cap, long budget, const EngineConfig& cfg);

// Trend of the light-tail sum along a t grid; Consistent iff it shrinks.
TrendReport light_tail_trend(const CountingProcess& cp, const std::vector<double>& t_grid,
                             double delta, double eps, long n_cap, long budget,
                             const EngineConfig& cfg);

}  // namespace raretail
