#include "raretail/risk.hpp"

#include "raretail/quadrature.hpp"

#include <cmath>
#include <cstring>

namespace raretail {

namespace {

constexpr long kArrivalGuard = 10'000'000;

// same composition as the random-sum cells, so r = 0 entrance runs couple
// path for path with random_sum_tail
std::uint64_t salt_of(std::uint64_t op, double x) {
    std::uint64_t xb;
    std::memcpy(&xb, &x, sizeof xb);
    return compose_id(op, 0, xb);
}

class DiscountedClaimsPath final : public SplitPath {
  public:
    DiscountedClaimsPath(const RiskModel& m, const RareSet& set, double t)
        : m_(&m), set_(&set), t_(t), acc_(m.dim(), 0.0), buf_(m.dim(), 0.0) {}
    void reset() override {
        std::fill(acc_.begin(), acc_.end(), 0.0);
        clock_ = 0.0;
        k_ = 0;
        stat_ = 0.0;
    }
    bool step(Noise& rng) override {
        ++k_;
        clock_ += m_->arrivals.law(k_).sample(rng);
        if (clock_ > t_) return false;
        if (k_ >= kArrivalGuard) throw ArrivalOverflowError("discounted_claims_path: guard");
        m_->claims.sample(rng, buf_.data());
        const double disc = std::exp(-m_->interest * clock_);
        for (int i = 0; i < m_->dim(); ++i) acc_[i] += buf_[i] * disc;
        stat_ = set_->y_projection(acc_);
        return true;
    }
    double statistic() const override { return stat_; }

  private:
    const RiskModel* m_;
    const RareSet* set_;
    double t_;
    std::vector<double> acc_, buf_;
    double clock_ = 0.0;
    long k_ = 0;
    double stat_ = 0.0;
};

class RuinPath final : public SplitPath {
  public:
    RuinPath(const RiskModel& m, const RareSet& set, double t)
        : m_(&m), set_(&set), t_(t), acc_(m.dim(), 0.0), buf_(m.dim(), 0.0),
          net_(m.dim(), 0.0) {}
    void reset() override {
        std::fill(acc_.begin(), acc_.end(), 0.0);
        clock_ = 0.0;
        k_ = 0;
        stat_ = 0.0;
    }
    bool step(Noise& rng) override {
        ++k_;
        clock_ += m_->arrivals.law(k_).sample(rng);
        if (clock_ > t_) return false;
        if (k_ >= kArrivalGuard) throw ArrivalOverflowError("ruin_path: guard");
        m_->claims.sample(rng, buf_.data());
        const double disc = std::exp(-m_->interest * clock_);
        for (int i = 0; i < m_->dim(); ++i) acc_[i] += buf_[i] * disc;
        // surplus is checked right after each claim; premiums only push it up
        // in between, so the path infimum sits at claim epochs
        const std::vector<double> prem = premium_integral(*m_, clock_);
        for (int i = 0; i < m_->dim(); ++i) net_[i] = acc_[i] - prem[i];
        stat_ = std::max(stat_, set_->y_projection(net_));
        return true;
    }
    double statistic() const override { return stat_; }

  private:
    const RiskModel* m_;
    const RareSet* set_;
    double t_;
    std::vector<double> acc_, buf_, net_;
    double clock_ = 0.0;
    long k_ = 0;
    double stat_ = 0.0;
};

// lambda(s) on a uniform grid over [0, t] by Monte Carlo, one shared path
// sweep: each simulated arrival sequence bumps every grid cell it reaches.
std::vector<double> tabulate_lambda(const CountingProcess& cp, double t, int grid_n,
                                    long budget, const EngineConfig& cfg) {
    std::vector<double> lam(static_cast<std::size_t>(grid_n) + 1, 0.0);
    const double dt = t / grid_n;
    const std::uint64_t base = compose_id(stream_id(cfg.module_tag, 3), 0x7AB1EULL);
    const long n = std::max<long>(budget, 100);
    for (long i = 0; i < n; ++i) {
        RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
        double clock = 0.0;
        for (long k = 1; k <= kArrivalGuard; ++k) {
            clock += cp.law(k).sample(rng);
            if (clock > t) break;
            const int cell = static_cast<int>(std::ceil(clock / dt));
            for (int j = std::max(1, cell); j <= grid_n; ++j) lam[static_cast<std::size_t>(j)] += 1.0;
        }
    }
    for (double& v : lam) v /= static_cast<double>(n);
    return lam;
}

// integral of g(s) d lambda(s) over (0, t]
double stieltjes_lambda(const RiskModel& model, const std::function<double(double)>& g,
                        double t, const EngineConfig& cfg) {
    const CountingProcess& cp = model.arrivals;
    if (cp.has_analytic_lambda() && cp.iid() && cp.law(1).family() == Family::Exponential) {
        const double rate = cp.law(1).param(0);
        auto f = [&](double s) { return rate * g(s); };
        return integrate(f, 0.0, t, 1e-10, 1e-8).value;
    }
    if (cp.has_analytic_lambda() && cp.iid() && cp.law(1).family() == Family::Degenerate) {
        const double sp = cp.law(1).param(0);
        double sum = 0.0;
        for (double s = sp; s <= t + 1e-12; s += sp) sum += g(s);
        return sum;
    }
    const int grid_n = 256;
    const std::vector<double> lam = tabulate_lambda(cp, t, grid_n, 20'000, cfg);
    const double dt = t / grid_n;
    double sum = 0.0;
    for (int j = 1; j <= grid_n; ++j) {
        const double mid = (static_cast<double>(j) - 0.5) * dt;
        sum += g(mid) * (lam[static_cast<std::size_t>(j)] - lam[static_cast<std::size_t>(j - 1)]);
    }
    return sum;
}

bool fa_tail_is_analytic(const VectorLaw& law, const RareSet& set, const EngineConfig& cfg) {
    // probe: analytic estimates carry the Analytic tag and zero budget cost
    return fa_tail(law, set, 1.0, cfg).method == Method::Analytic;
}

}  // namespace

void RiskModel::validate() const {
    if (static_cast<int>(allocation.size()) != dim())
        throw std::invalid_argument("risk model: allocation/claims dimension mismatch");
    double sum = 0.0;
    for (double l : allocation) {
        if (l <= 0.0) throw std::invalid_argument("risk model: allocation must be positive");
        sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("risk model: allocation must sum to 1");
    if (static_cast<int>(premium_caps.size()) != dim())
        throw std::invalid_argument("risk model: premium caps dimension mismatch");
    for (double c : premium_caps)
        if (c < 0.0) throw std::invalid_argument("risk model: negative premium cap");
    if (interest < 0.0) throw std::invalid_argument("risk model: negative interest");
    if (horizon <= 0.0) throw std::invalid_argument("risk model: horizon must be positive");
}

std::vector<double> premium_integral(const RiskModel& model, double t) {
    std::vector<double> out(model.premium_caps.size());
    const double r = model.interest;
    const double factor = r > 0.0 ? (1.0 - std::exp(-r * t)) / r : t;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = model.premium_caps[i] * factor;
    return out;
}

std::vector<double> discounted_claims(const RiskModel& model, double t, RngStream& rng) {
    std::vector<double> acc(model.dim(), 0.0), buf(model.dim(), 0.0);
    double clock = 0.0;
    for (long k = 1;; ++k) {
        clock += model.arrivals.law(k).sample(rng);
        if (clock > t) break;
        if (k >= kArrivalGuard) throw ArrivalOverflowError("discounted_claims: guard");
        model.claims.sample(rng, buf.data());
        const double disc = std::exp(-model.interest * clock);
        for (int i = 0; i < model.dim(); ++i) acc[i] += buf[i] * disc;
    }
    return acc;
}

PathFactory discounted_claims_path(const RiskModel& model, const RareSet& set, double t) {
    return [&model, &set, t] { return std::make_unique<DiscountedClaimsPath>(model, set, t); };
}

PathFactory ruin_path(const RiskModel& model, const RareSet& set, double t) {
    return [&model, &set, t] { return std::make_unique<RuinPath>(model, set, t); };
}

Estimate entrance_probability(const RiskModel& model, const RareSet& set, double x, double t,
                              const EngineConfig& cfg) {
    model.validate();
    if (!(x > 0.0) || t < 0.0 || t > model.horizon)
        throw std::invalid_argument("entrance_probability: need x > 0, t in [0, horizon]");
    return estimate_rare(discounted_claims_path(model, set, t), x, cfg, salt_of(0xD157ULL, x));
}

double theorem61_asymptote(const RiskModel& model, const RareSet& set, double x, double t,
                           const EngineConfig& cfg) {
    model.validate();
    const double r = model.interest;
    std::function<double(double)> fa_curve;
    if (fa_tail_is_analytic(model.claims, set, cfg)) {
        fa_curve = [&](double u) { return fa_tail(model.claims, set, u, cfg).value; };
    } else {
        // estimate log F_A on a log-spaced grid across [x, x e^{rt}] and
        // interpolate linearly in (log u, log F)
        const int K = 9;
        auto grid = std::make_shared<std::vector<std::pair<double, double>>>();
        const double lo = std::log(x), hi = std::log(x * std::exp(r * t)) + 1e-12;
        for (int i = 0; i < K; ++i) {
            const double lu = lo + (hi - lo) * i / (K - 1);
            const Estimate e = fa_tail(model.claims, set, std::exp(lu), cfg);
            grid->emplace_back(lu, std::log(std::max(e.value, 1e-300)));
        }
        fa_curve = [grid](double u) {
            const double lu = std::log(u);
            const auto& g = *grid;
            if (lu <= g.front().first) return std::exp(g.front().second);
            if (lu >= g.back().first) return std::exp(g.back().second);
            for (std::size_t i = 1; i < g.size(); ++i) {
                if (lu <= g[i].first) {
                    const double w = (lu - g[i - 1].first) / (g[i].first - g[i - 1].first);
                    return std::exp(g[i - 1].second * (1.0 - w) + g[i].second * w);
                }
            }
            return std::exp(g.back().second);
        };
    }
    auto g = [&](double s) { return fa_curve(x * std::exp(r * s)); };
    return stieltjes_lambda(model, g, t, cfg);
}

Estimate ruin_probability(const RiskModel& model, RuinSetKind kind, double x, double t,
                          const EngineConfig& cfg) {
    model.validate();
    if (!(x > 0.0) || t < 0.0 || t > model.horizon)
        throw std::invalid_argument("ruin_probability: need x > 0, t in [0, horizon]");
    const RareSet set = RareSet::ruin_translate(model.allocation, kind);
    return estimate_rare(ruin_path(model, set, t), x, cfg, salt_of(0x201AULL, x));
}

CoupledRuinCheck coupled_ruin_entrance(const RiskModel& model, RuinSetKind kind, double x,
                                       double t, long n, const EngineConfig& cfg) {
    model.validate();
    const RareSet set = RareSet::ruin_translate(model.allocation, kind);
    std::vector<long> ruin_hits(1, 0), ent_hits(1, 0);
    bool ordered = true;
    const std::uint64_t base = compose_id(stream_id(cfg.module_tag, 4), salt_of(0xC0DDULL, x));
    long rh = 0, eh = 0;
    for (long i = 0; i < n; ++i) {
        RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
        std::vector<double> acc(model.dim(), 0.0), buf(model.dim(), 0.0), net(model.dim());
        double clock = 0.0, ruin_stat = 0.0;
        for (long k = 1;; ++k) {
            clock += model.arrivals.law(k).sample(rng);
            if (clock > t) break;
            if (k >= kArrivalGuard) throw ArrivalOverflowError("coupled_ruin_entrance: guard");
            model.claims.sample(rng, buf.data());
            const double disc = std::exp(-model.interest * clock);
            for (int j = 0; j < model.dim(); ++j) acc[j] += buf[j] * disc;
            const std::vector<double> prem = premium_integral(model, clock);
            for (int j = 0; j < model.dim(); ++j) net[j] = acc[j] - prem[j];
            ruin_stat = std::max(ruin_stat, set.y_projection(net));
        }
        const bool ruin = ruin_stat > x;
        const bool ent = set.y_projection(acc) > x;
        if (ruin && !ent) ordered = false;
        rh += ruin ? 1 : 0;
        eh += ent ? 1 : 0;
    }
    CoupledRuinCheck out;
    out.ruin = crude_from_tally({n, rh});
    out.entrance = crude_from_tally({n, eh});
    out.ordering_held = ordered;
    return out;
}

double mrv_risk_closed_form(const RiskModel& model, const RareSet& set, double x, double t,
                            const EngineConfig& cfg) {
    model.validate();
    if (model.claims.kind() != VectorKind::Mrv)
        throw std::invalid_argument("mrv_risk_closed_form: claims are not MRV");
    const double alpha = model.claims.alpha();
    if (alpha <= 1.0) throw InfMeanError("mrv_risk_closed_form: alpha <= 1");
    auto g = [&](double s) { return std::exp(-alpha * model.interest * s); };
    return mu_A(model.claims, set) * model.claims.radial().tail(x) *
           stieltjes_lambda(model, g, t, cfg);
}

Assumption62Report check_assumption_62(const RiskModel& model, const RareSet& set, double c,
                                       double t_star, int n_cap, long budget,
                                       const EngineConfig& cfg) {
    model.validate();
    const MeanEstimate mu = fa_mean(model.claims, set, 100'000, cfg);
    if (!(c > mu.value))
        throw std::invalid_argument("check_assumption_62: need c > mu_{F_A}");
    Assumption62Report out;
    out.c = c;

    // survival of the delayed process: P[N*(t) >= k], k = 0..n_cap, and the
    // same events expressed as P[theta_2 + ... + theta_{k+1} <= t], counted
    // from the same simulated sequences
    const CountingProcess delayed = model.arrivals.delayed();
    std::vector<double> survival(static_cast<std::size_t>(n_cap) + 2, 0.0);
    std::vector<double> partial_sum_events(survival.size(), 0.0);
    const long n = std::max<long>(budget, 1000);
    const std::uint64_t base = compose_id(stream_id(cfg.module_tag, 5), 0xA62ULL);
    for (long i = 0; i < n; ++i) {
        RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
        double clock = 0.0;
        long count = 0;
        for (long k = 1; count <= n_cap; ++k) {
            clock += delayed.law(k).sample(rng);
            if (clock > t_star) break;
            ++count;
        }
        for (long k = 0; k <= std::min<long>(count, n_cap + 1); ++k) {
            survival[static_cast<std::size_t>(k)] += 1.0;
            partial_sum_events[static_cast<std::size_t>(k)] += 1.0;
        }
    }
    for (double& v : survival) v /= static_cast<double>(n);
    for (double& v : partial_sum_events) v /= static_cast<double>(n);

    for (int nn = 0; nn <= n_cap; ++nn) {
        double denom = 1.0;
        if (nn >= 1) denom = fa_tail(model.claims, set, c * nn, cfg).value;
        if (denom <= 0.0) break;
        const double num659 = nn == 0 ? 1.0 : survival[static_cast<std::size_t>(nn - 1)];
        const double num660 = nn == 0 ? 1.0 : partial_sum_events[static_cast<std::size_t>(nn - 1)];
        out.terms_659.push_back(num659 / denom);
        out.terms_660.push_back(num660 / denom);
        out.partial_sum += num659 / denom;
    }

    // geometric ratio over the last (up to) 10 positive terms
    const int m = static_cast<int>(out.terms_659.size());
    int used = 0;
    double log_ratio_sum = 0.0;
    for (int i = m - 1; i >= 1 && used < 10; --i) {
        const double a = out.terms_659[static_cast<std::size_t>(i - 1)];
        const double b = out.terms_659[static_cast<std::size_t>(i)];
        if (a > 0.0 && b > 0.0) {
            log_ratio_sum += std::log(b / a);
            ++used;
        } else {
            break;
        }
    }
    if (used > 0) {
        out.tail_ratio = std::exp(log_ratio_sum / used);
        const double last = out.terms_659.back();
        if (out.tail_ratio < 1.0)
            out.remainder = last * out.tail_ratio / (1.0 - out.tail_ratio);
        out.summable = out.tail_ratio < 1.0 && out.remainder < 0.01 * out.partial_sum;
    }
    // terms that vanished entirely decay faster than any ratio test needs
    if (used == 0 && m >= 2 && out.terms_659.back() == 0.0) out.summable = true;
    return out;
}

WeightedUniformityReport weighted_sum_uniformity(const VectorLaw& law, const RareSet& set,
                                                 int n, double a, double b, int coeff_samples,
                                                 const std::vector<double>& x_grid,
                                                 const EngineConfig& cfg) {
    if (!(a > 0.0 && a <= b)) throw std::invalid_argument("weighted_sum_uniformity: 0 < a <= b");
    if (n < 1) throw std::invalid_argument("weighted_sum_uniformity: need n >= 1");
    WeightedUniformityReport out;

    std::vector<std::vector<double>> draws;
    draws.emplace_back(n, a);  // corners first
    draws.emplace_back(n, b);
    RngStream coeff_rng(cfg.seed, compose_id(stream_id(cfg.module_tag, 6), 0xCCULL));
    for (int s = 0; s < coeff_samples; ++s) {
        std::vector<double> c(n);
        for (double& v : c) v = a + (b - a) * coeff_rng.next_u01();
        draws.push_back(std::move(c));
    }

    struct WeightedPath final : SplitPath {
        const VectorLaw* law;
        const RareSet* set;
        const std::vector<double>* coeff;
        std::vector<double> acc, buf;
        int k = 0;
        double stat = 0.0;
        WeightedPath(const VectorLaw& l, const RareSet& s, const std::vector<double>& c)
            : law(&l), set(&s), coeff(&c), acc(l.dim(), 0.0), buf(l.dim(), 0.0) {}
        void reset() override {
            std::fill(acc.begin(), acc.end(), 0.0);
            k = 0;
            stat = 0.0;
        }
        bool step(Noise& rng) override {
            law->sample(rng, buf.data());
            const double c = (*coeff)[static_cast<std::size_t>(k)];
            for (int i = 0; i < law->dim(); ++i) acc[i] += c * buf[i];
            stat = set->y_projection(acc);
            return ++k < static_cast<int>(coeff->size());
        }
        double statistic() const override { return stat; }
    };

    for (std::size_t d = 0; d < draws.size(); ++d) {
        const std::vector<double>& coeff = draws[d];
        PathFactory make = [&law, &set, &coeff] {
            return std::make_unique<WeightedPath>(law, set, coeff);
        };
        for (double x : x_grid) {
            // singles are scale relations: P[c X in xA] = F_A(x / c)
            double singles = 0.0, singles_var = 0.0;
            for (double c : coeff) {
                const Estimate e = fa_tail(law, set, x / c, cfg);
                singles += e.value;
                singles_var += e.std_error * e.std_error;
            }
            const Estimate joint =
                n == 1 ? fa_tail(law, set, x / coeff[0], cfg)
                       : estimate_rare(make, x, cfg,
                                       compose_id(0x3E16ULL, d, static_cast<std::uint64_t>(x * 512)));
            if (joint.zero_hit || singles <= 0.0) continue;
            WeightedUniformityReport::Row row;
            row.coeffs = coeff;
            row.x = x;
            row.ratio = joint.value / singles;
            row.ratio_se = ratio_std_error(joint.value, joint.std_error, singles,
                                           std::sqrt(singles_var));
            out.rows.push_back(std::move(row));
        }
    }
    // summary: worst deviation at the last grid point per draw
    double maxdev = 0.0;
    for (const auto& row : out.rows)
        if (row.x == x_grid.back()) maxdev = std::max(maxdev, std::abs(row.ratio - 1.0));
    out.max_dev = maxdev;
    out.verdict = maxdev <= 0.20 ? Verdict::Consistent : Verdict::Inconsistent;
    return out;
}

}  // namespace raretail
