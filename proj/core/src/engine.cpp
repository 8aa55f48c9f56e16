#include "raretail/engine.hpp"

#include "raretail/scalar_law.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace raretail {

const char* to_string(Method m) {
    switch (m) {
        case Method::Crude: return "crude";
        case Method::Splitting: return "splitting";
        case Method::Analytic: return "analytic";
    }
    return "crude";
}

Estimate analytic_estimate(double value) {
    Estimate e;
    e.value = value;
    e.ci_lo = e.ci_hi = value;
    e.method = Method::Analytic;
    return e;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 16u));
}

void parallel_for(long count, int workers, const std::function<void(long)>& fn) {
    workers = std::min<long>(resolve_workers(workers), count);
    if (workers <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= count || failed.load()) break;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

ChunkTally merge(ChunkTally a, ChunkTally b) { return {a.n + b.n, a.hits + b.hits}; }

namespace {

constexpr double kZ = 1.959963984540054;

void wilson_ci(Estimate& e, long n, long hits) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    e.value = p;
    e.n_effective = n;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    if (hits == 0) {
        e.zero_hit = true;
        e.ci_lo = 0.0;
        e.ci_hi = 3.0 / static_cast<double>(n);  // rule of three
        return;
    }
    const double z2n = kZ * kZ / static_cast<double>(n);
    const double center = (p + 0.5 * z2n) / (1.0 + z2n);
    const double hw =
        kZ * std::sqrt(p * (1.0 - p) / static_cast<double>(n) + 0.25 * z2n / static_cast<double>(n)) /
        (1.0 + z2n);
    e.ci_lo = std::max(0.0, center - hw);
    e.ci_hi = std::min(1.0, center + hw);
    e.ci_lo = std::min(e.ci_lo, p);
    e.ci_hi = std::max(e.ci_hi, p);
}

constexpr std::uint64_t kPilotTag = 0x70696C6F74ULL;   // branch space for pilots
constexpr std::uint64_t kCrudeTag = 0x6372756445ULL;   // branch space for crude draws

// A path is identified by its per-step uniform inputs: the recorded prefix
// in `step_u`, and steps past the prefix drawn from streams derived from
// `tail_branch`. Cloning copies the prefix; refresh moves perturb it. No
// path state is ever stored, only the inputs needed to regenerate it.
struct Lineage {
    std::vector<std::vector<double>> step_u;
    std::uint64_t tail_branch = 0;
    long crossing = -1;  // first step with stat > current level, set on survival
};

struct RunOutcome {
    double stat = 0.0;
    long crossing = -1;
};

// Serves the recorded inputs of one step, extending from the fresh stream
// past the record; optionally records everything it hands out.
class LineageNoise final : public Noise {
  public:
    LineageNoise(const std::vector<double>* recorded, RngStream fresh,
                 std::vector<double>* record)
        : recorded_(recorded), fresh_(fresh), record_(record) {}
    double u01() override {
        double v;
        if (recorded_ && k_ < recorded_->size())
            v = (*recorded_)[k_];
        else
            v = fresh_.next_u01();
        ++k_;
        if (record_) record_->push_back(v);
        return v;
    }

  private:
    const std::vector<double>* recorded_;
    RngStream fresh_;
    std::vector<double>* record_;
    std::size_t k_ = 0;
};

RunOutcome replay(SplitPath& path, const Lineage& lin, double level, std::uint64_t seed,
                  std::uint64_t base_id, std::vector<std::vector<double>>* record = nullptr) {
    path.reset();
    if (record) record->clear();
    RunOutcome out;
    for (long i = 0;; ++i) {
        const std::vector<double>* rec =
            i < static_cast<long>(lin.step_u.size()) ? &lin.step_u[static_cast<std::size_t>(i)]
                                                     : nullptr;
        std::vector<double>* out_rec = nullptr;
        if (record) {
            record->emplace_back();
            out_rec = &record->back();
        }
        LineageNoise noise(
            rec,
            RngStream(seed, compose_id(base_id, lin.tail_branch, static_cast<std::uint64_t>(i))),
            out_rec);
        const bool more = path.step(noise);
        if (out.crossing < 0 && path.statistic() > level) out.crossing = i;
        if (!more) break;
        if (i > 100'000'000) throw std::runtime_error("splitting path exceeded step guard");
    }
    out.stat = path.statistic();
    return out;
}

// Conditional refresh: one Metropolis sweep over the recorded steps with a
// preconditioned Crank-Nicolson proposal in Gaussian quantile space (a
// symmetric proposal for the uniform prior, so acceptance is just the level
// constraint). Local moves keep the dominant jump coordinate mobile where
// independent redraws would freeze it, which is what keeps the survivor
// pools from collapsing onto a few clones.
void refresh_sweep(SplitPath& path, Lineage& lin, double level, std::uint64_t seed,
                   std::uint64_t base_id, std::uint64_t move_space, double rho) {
    const double ortho = std::sqrt(1.0 - rho * rho);
    std::vector<double> old;
    for (std::size_t k = 0; k < lin.step_u.size(); ++k) {
        std::vector<double>& block = lin.step_u[k];
        if (block.empty()) continue;
        old = block;
        RngStream prop(seed, compose_id(move_space, static_cast<std::uint64_t>(k)));
        for (double& u : block) {
            const double z = inverse_normal_cdf(u);
            const double xi = inverse_normal_cdf(prop.next_u01());
            double v = 1.0 - normal_tail(rho * z + ortho * xi);
            v = std::min(std::max(v, 0x1.0p-53), 1.0 - 0x1.0p-53);
            u = v;
        }
        const RunOutcome r = replay(path, lin, level, seed, base_id);
        if (!(r.stat > level)) block = old;  // reject the block move
    }
}

constexpr double clamp_u(double v) {
    return std::min(std::max(v, 0x1.0p-53), 1.0 - 0x1.0p-53);
}

// Shrinkage slice move on a single coordinate: sample uniformly from the
// feasible part of a fixed bracket around the current Gaussian quantile,
// shrinking toward the current point on every rejection. Near-exact
// conditional redraws like this are what actually decorrelate the one big
// coordinate of a single-jump path; the pCN sweeps alone random-walk it too
// slowly and leave the product estimator biased low.
void slice_move(SplitPath& path, Lineage& lin, double level, std::uint64_t seed,
                std::uint64_t base_id, std::size_t k, std::size_t j, RngStream& prop) {
    double& u = lin.step_u[k][j];
    const double z0 = inverse_normal_cdf(u);
    const double keep = u;
    // vertical slice under the Gaussian prior: phi(z) > phi(z0) * U gives
    // |z| <= sqrt(z0^2 - 2 ln U); the constraint indicator is handled by
    // shrinking the bracket toward the current point
    const double lnu = std::log(prop.next_u01());
    const double bound = std::sqrt(std::max(0.0, z0 * z0 - 2.0 * lnu));
    double lo = -bound, hi = bound;
    for (int it = 0; it < 60; ++it) {
        const double z = lo + (hi - lo) * prop.next_u01();
        u = clamp_u(1.0 - normal_tail(z));
        if (replay(path, lin, level, seed, base_id).stat > level) return;  // accepted
        if (z < z0)
            lo = z;
        else
            hi = z;
        if (hi - lo < 1e-14) break;
    }
    u = keep;
}

// Random-scan slice refresh over a handful of coordinates.
void slice_pass(SplitPath& path, Lineage& lin, double level, std::uint64_t seed,
                std::uint64_t base_id, std::uint64_t move_space) {
    std::size_t total = 0;
    for (const auto& block : lin.step_u) total += block.size();
    if (total == 0) return;
    RngStream prop(seed, compose_id(move_space, 0x517CEULL));
    const std::size_t passes = std::min<std::size_t>(4, total);
    for (std::size_t p = 0; p < passes; ++p) {
        std::size_t pick = static_cast<std::size_t>(prop.next_u01() * static_cast<double>(total));
        if (pick >= total) pick = total - 1;
        std::size_t k = 0;
        while (pick >= lin.step_u[k].size()) {
            pick -= lin.step_u[k].size();
            ++k;
        }
        slice_move(path, lin, level, seed, base_id, k, pick, prop);
    }
}

}  // namespace

Estimate crude_from_tally(ChunkTally t) {
    Estimate e;
    e.method = Method::Crude;
    if (t.n <= 0) throw std::invalid_argument("crude_from_tally: empty tally");
    wilson_ci(e, t.n, t.hits);
    return e;
}

Estimate estimate_crude(const std::function<bool(RngStream&)>& event, long n,
                        const EngineConfig& cfg, std::uint64_t salt) {
    if (n < 1) throw std::invalid_argument("estimate_crude: need n >= 1");
    const long chunk = std::max<long>(1, cfg.chunk);
    const long n_chunks = (n + chunk - 1) / chunk;
    std::vector<ChunkTally> tallies(n_chunks);
    const std::uint64_t base = compose_id(stream_id(cfg.module_tag, 0), salt, kCrudeTag);
    parallel_for(n_chunks, cfg.workers, [&](long c) {
        ChunkTally t;
        const long lo = c * chunk, hi = std::min(n, lo + chunk);
        for (long i = lo; i < hi; ++i) {
            RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
            t.n++;
            if (event(rng)) t.hits++;
        }
        tallies[c] = t;
    });
    ChunkTally total;
    for (const ChunkTally& t : tallies) total = merge(total, t);
    return crude_from_tally(total);
}

Estimate estimate_crude_paths(const PathFactory& make, double threshold, long n,
                              const EngineConfig& cfg, std::uint64_t salt) {
    auto event = [&make, threshold](RngStream& rng) {
        auto p = make();
        p->reset();
        StreamNoise noise(rng);
        while (p->step(noise)) {
        }
        return p->statistic() > threshold;
    };
    return estimate_crude(event, n, cfg, salt);
}

std::vector<double> auto_levels(std::vector<double> pilot_stats, double x, double passage,
                                int max_levels) {
    if (pilot_stats.empty()) return {x};
    std::sort(pilot_stats.begin(), pilot_stats.end());
    const long n = static_cast<long>(pilot_stats.size());
    if (pilot_stats.front() == pilot_stats.back()) return {x};  // degenerate pilot
    // already likely enough: single level
    const long above = n - (std::upper_bound(pilot_stats.begin(), pilot_stats.end(), x) -
                            pilot_stats.begin());
    if (static_cast<double>(above) / static_cast<double>(n) >= passage) return {x};

    std::vector<double> levels;
    double p = 1.0;
    while (static_cast<int>(levels.size()) + 1 < max_levels) {
        p *= passage;
        if (p * static_cast<double>(n) < 20.0) break;  // quantile no longer resolvable
        const long idx = std::min<long>(n - 1, static_cast<long>(std::floor((1.0 - p) * n)));
        const double lvl = pilot_stats[idx];
        if (!levels.empty() && lvl <= levels.back()) continue;
        if (lvl >= x) break;
        levels.push_back(lvl);
    }
    // extend multiplicatively at the pilot's last observed growth rate
    if (!levels.empty() && levels.back() < x) {
        double factor = levels.size() >= 2 ? levels.back() / levels[levels.size() - 2] : 0.0;
        if (factor > 1.0 + 1e-9 && levels.back() > 0.0) {
            double lvl = levels.back() * factor;
            while (lvl < x && static_cast<int>(levels.size()) + 1 < max_levels) {
                levels.push_back(lvl);
                lvl *= factor;
            }
        }
    }
    levels.push_back(x);
    return levels;
}

Estimate estimate_splitting(const PathFactory& make, const std::vector<double>& levels,
                            long n_per_level, std::uint64_t seed, std::uint64_t base_id,
                            double move_rho, int move_sweeps) {
    if (levels.empty()) throw std::invalid_argument("estimate_splitting: no levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (!(levels[i] > levels[i - 1]))
            throw std::invalid_argument("estimate_splitting: levels must increase");
    if (n_per_level < 2) throw std::invalid_argument("estimate_splitting: n_per_level < 2");
    if (!(move_rho > 0.0 && move_rho < 1.0))
        throw std::invalid_argument("estimate_splitting: move_rho must lie in (0,1)");

    auto path = make();
    const long N = n_per_level;
    std::vector<Lineage> pool(N);
    for (long s = 0; s < N; ++s)
        pool[s].tail_branch = compose_id(0, static_cast<std::uint64_t>(s));

    Estimate e;
    e.method = levels.size() > 1 ? Method::Splitting : Method::Crude;
    double prod = 1.0;
    double log_var = 0.0;  // delta method: Var(log P) ~ sum (1-q)/(q N)
    long total_paths = 0;

    std::vector<std::vector<double>> record;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const double lvl = levels[j];
        std::vector<Lineage> survivors;
        survivors.reserve(static_cast<std::size_t>(N));
        for (long s = 0; s < N; ++s) {
            RunOutcome r = replay(*path, pool[s], lvl, seed, base_id, &record);
            ++total_paths;
            if (r.stat > lvl) {
                Lineage lin;
                lin.step_u = record;  // materialized per-step inputs
                lin.tail_branch = pool[s].tail_branch;
                lin.crossing = r.crossing;
                survivors.push_back(std::move(lin));
            }
        }
        const double q = static_cast<double>(survivors.size()) / static_cast<double>(N);
        if (std::getenv("RARETAIL_DEBUG_SPLIT"))
            std::fprintf(stderr, "  level %zu (%.4g): %zu/%ld survive\n", j, lvl,
                         survivors.size(), N);
        if (survivors.empty()) {
            e.value = 0.0;
            e.zero_hit = true;
            e.ci_lo = 0.0;
            e.ci_hi = std::min(1.0, prod * 3.0 / static_cast<double>(N));
            e.n_effective = total_paths;
            e.std_error = 0.0;
            return e;
        }
        prod *= q;
        log_var += (1.0 - q) / (q * static_cast<double>(N));
        if (j + 1 < levels.size()) {
            const long m = static_cast<long>(survivors.size());
            std::vector<Lineage> next(N);
            for (long s = 0; s < N; ++s) {
                const Lineage& parent = survivors[s % m];
                Lineage child;
                // keep the crossing prefix, re-randomize beyond it
                child.step_u.assign(parent.step_u.begin(),
                                    parent.step_u.begin() + parent.crossing + 1);
                child.tail_branch = compose_id(static_cast<std::uint64_t>(j + 1) << 24,
                                               static_cast<std::uint64_t>(s));
                for (int sweep = 0; sweep < move_sweeps; ++sweep) {
                    // alternate proposal scales: tight sweeps track the
                    // constraint boundary, bolder ones jump across it
                    const double rho = sweep % 2 == 0 ? move_rho : 0.7 * move_rho;
                    refresh_sweep(*path, child, lvl, seed, base_id,
                                  compose_id(child.tail_branch, 0x5EEDULL,
                                             static_cast<std::uint64_t>(sweep)),
                                  rho);
                }
                slice_pass(*path, child, lvl, seed, base_id,
                           compose_id(child.tail_branch, 0xA11CEULL));
                next[s] = std::move(child);
            }
            pool = std::move(next);
        }
    }
    e.value = prod;
    e.n_effective = total_paths;
    const double cv = std::sqrt(log_var);
    e.std_error = prod * cv;
    e.ci_lo = std::max(0.0, prod * std::exp(-kZ * cv));
    e.ci_hi = std::min(1.0, prod * std::exp(kZ * cv));
    return e;
}

double student_t_975(int dof) {
    static const double tbl[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof < 1) return kZ;
    if (dof <= 30) return tbl[dof - 1];
    return kZ;
}

Estimate estimate_rare(const PathFactory& make, double x, const EngineConfig& cfg,
                       std::uint64_t salt) {
    const std::uint64_t base = compose_id(stream_id(cfg.module_tag, 0), salt);

    // pilot: fresh paths for the ladder
    auto path = make();
    std::vector<double> pilot(cfg.pilot_n);
    {
        const std::uint64_t pbase = compose_id(base, kPilotTag);
        for (long i = 0; i < cfg.pilot_n; ++i) {
            Lineage lin;
            lin.tail_branch = compose_id(0, static_cast<std::uint64_t>(i));
            pilot[i] = replay(*path, lin, x, cfg.seed, pbase).stat;
        }
    }
    const std::vector<double> levels = auto_levels(std::move(pilot), x, cfg.level_passage,
                                                   cfg.max_levels);

    const int R = std::max(2, cfg.replicates);
    std::vector<Estimate> runs(R);
    parallel_for(R, cfg.workers, [&](long r) {
        runs[r] = estimate_splitting(make, levels, cfg.n_per_level, cfg.seed,
                                     compose_id(base, static_cast<std::uint64_t>(r + 1)),
                                     cfg.move_rho, cfg.move_sweeps);
    });

    Estimate e;
    e.method = levels.size() > 1 ? Method::Splitting : Method::Crude;
    double mean = 0.0;
    long n_eff = 0;
    bool all_zero = true;
    for (const Estimate& r : runs) {
        mean += r.value;
        n_eff += r.n_effective;
        all_zero = all_zero && r.zero_hit;
    }
    mean /= R;
    e.n_effective = n_eff;
    if (all_zero) {
        e.zero_hit = true;
        e.value = 0.0;
        double bound = 0.0;
        for (const Estimate& r : runs) bound += r.ci_hi;
        e.ci_lo = 0.0;
        // mean per-replicate bound, tightened by the R-fold total effort
        e.ci_hi = std::min(1.0, bound / (static_cast<double>(R) * R));
        return e;
    }
    double ss = 0.0;
    for (const Estimate& r : runs) ss += (r.value - mean) * (r.value - mean);
    const double se = std::sqrt(ss / (R * (R - 1.0)));
    const double t = student_t_975(R - 1);
    e.value = mean;
    e.std_error = se;
    e.ci_lo = std::max(0.0, mean - t * se);
    e.ci_hi = std::min(1.0, mean + t * se);
    return e;
}

}  // namespace raretail
