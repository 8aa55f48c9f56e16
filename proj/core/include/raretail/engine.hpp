#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "raretail/estimate.hpp"
#include "raretail/rng.hpp"

namespace raretail {

// A path simulated step by step. Each step consumes a fixed number of
// uniforms for its model; the engine can therefore regenerate any path from
// the per-step inputs alone -- no trajectory state is ever stored. The
// running statistic must be nondecreasing in the step index (sums of
// non-negative contributions and running maxima both qualify).
class SplitPath {
  public:
    virtual ~SplitPath() = default;
    virtual void reset() = 0;
    virtual bool step(Noise& noise) = 0;  // false once the path is complete
    virtual double statistic() const = 0;
};

using PathFactory = std::function<std::unique_ptr<SplitPath>()>;

// Adapter for a statistic drawn in one shot.
class SingleDrawPath final : public SplitPath {
  public:
    explicit SingleDrawPath(std::function<double(Noise&)> draw) : draw_(std::move(draw)) {}
    void reset() override { done_ = false; value_ = 0.0; }
    bool step(Noise& noise) override {
        if (done_) return false;
        value_ = draw_(noise);
        done_ = true;
        return false;
    }
    double statistic() const override { return value_; }

  private:
    std::function<double(Noise&)> draw_;
    bool done_ = false;
    double value_ = 0.0;
};

struct EngineConfig {
    std::uint64_t seed = 20240801;
    std::uint32_t module_tag = 1;
    int workers = 0;  // 0: hardware concurrency
    long chunk = 8192;
    // splitting
    int replicates = 10;
    long n_per_level = 20000;
    int max_levels = 12;
    long pilot_n = 4000;
    double level_passage = 0.2;
    // conditional-refresh proposal correlation in Gaussian quantile space
    double move_rho = 0.9;
    int move_sweeps = 3;
};

// Crude Monte Carlo over a boolean event. Deterministic for fixed
// (seed, chunk) regardless of worker count: draw i always uses the stream
// derived from its global index, and chunk tallies merge in index order.
Estimate estimate_crude(const std::function<bool(RngStream&)>& event, long n,
                        const EngineConfig& cfg, std::uint64_t salt = 0);

// Crude MC of P[final statistic > threshold] over paths.
Estimate estimate_crude_paths(const PathFactory& make, double threshold, long n,
                              const EngineConfig& cfg, std::uint64_t salt = 0);

// One fixed-effort splitting run: estimate = product of level passage
// fractions, stderr by the delta method across levels. Levels must increase
// and end at the threshold. Survivor pools are resampled by regenerating
// paths from retained per-step inputs, re-randomizing beyond the level
// crossing and refreshing the prefix with Crank-Nicolson moves conditioned
// on staying above the level.
Estimate estimate_splitting(const PathFactory& make, const std::vector<double>& levels,
                            long n_per_level, std::uint64_t seed, std::uint64_t base_id,
                            double move_rho = 0.9, int move_sweeps = 3);

// Quantile ladder from a pilot sample of final statistics, targeting the
// given per-level passage, capped at max_levels, always ending at x.
std::vector<double> auto_levels(std::vector<double> pilot_stats, double x,
                                double passage = 0.2, int max_levels = 12);

// The engine entry point for rare tail probabilities P[stat > x]: pilot run,
// automatic ladder, independent splitting replicates merged with an
// empirical (Student-t) confidence interval. Falls back to plain replicated
// counting when the ladder collapses to one level.
Estimate estimate_rare(const PathFactory& make, double x, const EngineConfig& cfg,
                       std::uint64_t salt = 0);

// Exact fold of partial chunk tallies; exposed for the associativity tests.
struct ChunkTally {
    long n = 0;
    long hits = 0;
};
ChunkTally merge(ChunkTally a, ChunkTally b);
Estimate crude_from_tally(ChunkTally t);

int resolve_workers(int requested);

// Deterministic parallel map: runs fn(i) for i in [0, count) on a worker
// pool; results are written into slot i, so the fold order is fixed.
void parallel_for(long count, int workers, const std::function<void(long)>& fn);

double student_t_975(int dof);

}  // namespace raretail
