#include "raretail/stopped_sums.hpp"

#include <cmath>
#include <cstring>

namespace raretail {

namespace {

constexpr long kTauGuard = 1'000'000;

class FixedSumPath final : public SplitPath {
  public:
    FixedSumPath(const VectorLaw& law, const RareSet& set, int n)
        : law_(&law), set_(&set), n_(n), acc_(law.dim(), 0.0), buf_(law.dim(), 0.0) {}
    void reset() override {
        std::fill(acc_.begin(), acc_.end(), 0.0);
        k_ = 0;
        stat_ = 0.0;
    }
    bool step(Noise& rng) override {
        law_->sample(rng, buf_.data());
        for (int i = 0; i < law_->dim(); ++i) acc_[i] += buf_[i];
        stat_ = set_->y_projection(acc_);
        return ++k_ < n_;
    }
    double statistic() const override { return stat_; }

  private:
    const VectorLaw* law_;
    const RareSet* set_;
    int n_;
    std::vector<double> acc_, buf_;
    int k_ = 0;
    double stat_ = 0.0;
};

class StoppedSumPath final : public SplitPath {
  public:
    StoppedSumPath(const StoppedSumModel& model, const RareSet& set)
        : model_(&model), set_(&set), acc_(model.vlaw.dim(), 0.0), buf_(model.vlaw.dim(), 0.0) {}
    void reset() override {
        std::fill(acc_.begin(), acc_.end(), 0.0);
        k_ = 0;
        tau_ = -1;
        stat_ = 0.0;
    }
    bool step(Noise& rng) override {
        if (tau_ < 0) {  // step 0 draws the stop count; empty sum stays at the origin
            const double t = std::floor(model_->tau.sample(rng));
            if (t > static_cast<double>(kTauGuard))
                throw TauOverflowError("stopped sum: tau exceeded the per-path guard");
            tau_ = static_cast<long>(std::max(0.0, t));
            return tau_ > 0;
        }
        model_->vlaw.sample(rng, buf_.data());
        for (int i = 0; i < model_->vlaw.dim(); ++i) acc_[i] += buf_[i];
        stat_ = set_->y_projection(acc_);
        return ++k_ < tau_;
    }
    double statistic() const override { return stat_; }

  private:
    const StoppedSumModel* model_;
    const RareSet* set_;
    std::vector<double> acc_, buf_;
    long k_ = 0, tau_ = -1;
    double stat_ = 0.0;
};

class TwoLawSumPath final : public SplitPath {
  public:
    TwoLawSumPath(const VectorLaw& a, const VectorLaw& b, const RareSet& set)
        : a_(&a), b_(&b), set_(&set), acc_(a.dim(), 0.0), buf_(a.dim(), 0.0) {}
    void reset() override {
        std::fill(acc_.begin(), acc_.end(), 0.0);
        k_ = 0;
        stat_ = 0.0;
    }
    bool step(Noise& rng) override {
        (k_ == 0 ? *a_ : *b_).sample(rng, buf_.data());
        for (int i = 0; i < a_->dim(); ++i) acc_[i] += buf_[i];
        stat_ = set_->y_projection(acc_);
        return ++k_ < 2;
    }
    double statistic() const override { return stat_; }

  private:
    const VectorLaw *a_, *b_;
    const RareSet* set_;
    std::vector<double> acc_, buf_;
    int k_ = 0;
    double stat_ = 0.0;
};

std::uint64_t cell_salt(std::uint64_t op, int n, double x) {
    std::uint64_t xb;
    static_assert(sizeof xb == sizeof x);
    std::memcpy(&xb, &x, sizeof xb);
    return compose_id(op, static_cast<std::uint64_t>(n), xb);
}

}  // namespace

bool fa_long_tailed(const VectorLaw& law) {
    switch (law.kind()) {
        case VectorKind::Independent:
            for (const auto& m : law.marginals())
                if (!m.is_long_tailed()) return false;
            return true;
        case VectorKind::Lwqd:
            return law.common().is_long_tailed();
        case VectorKind::Mrv:
            return true;
    }
    return false;
}

PathFactory fixed_sum_path(const VectorLaw& law, const RareSet& set, int n) {
    if (n < 1) throw std::invalid_argument("fixed_sum_path: need n >= 1");
    return [&law, &set, n] { return std::make_unique<FixedSumPath>(law, set, n); };
}

PathFactory stopped_sum_path(const StoppedSumModel& model, const RareSet& set) {
    return [&model, &set] { return std::make_unique<StoppedSumPath>(model, set); };
}

PathFactory two_law_sum_path(const VectorLaw& a, const VectorLaw& b, const RareSet& set) {
    if (a.dim() != b.dim()) throw std::invalid_argument("two_law_sum_path: dimension mismatch");
    return [&a, &b, &set] { return std::make_unique<TwoLawSumPath>(a, b, set); };
}

double ratio_std_error(double num, double num_se, double den, double den_se) {
    if (num <= 0.0 || den <= 0.0) return 0.0;
    const double r = num / den;
    return r * std::sqrt((num_se / num) * (num_se / num) + (den_se / den) * (den_se / den));
}

Estimate convolution_tail_over_set(const VectorLaw& a, const VectorLaw& b, const RareSet& set,
                                   double x, const EngineConfig& cfg) {
    return estimate_rare(two_law_sum_path(a, b, set), x, cfg, cell_salt(0xC0717ULL, 2, x));
}

Estimate nfold_tail(const VectorLaw& law, const RareSet& set, int n, double x,
                    const EngineConfig& cfg) {
    if (n < 1) throw std::invalid_argument("nfold_tail: need n >= 1");
    return estimate_rare(fixed_sum_path(law, set, n), x, cfg, cell_salt(0x5F01DULL, n, x));
}

TrendReport maxsum_ratio(const VectorLaw& a, const VectorLaw& b, const RareSet& set,
                         const std::vector<double>& x_grid, const EngineConfig& cfg) {
    if (!fa_long_tailed(a) || !fa_long_tailed(b))
        throw std::invalid_argument("maxsum_ratio: laws must be long-tailed on A");
    TrendReport r;
    r.target = 1.0;
    for (double x : x_grid) {
        const Estimate num = convolution_tail_over_set(a, b, set, x, cfg);
        const Estimate d1 = fa_tail(a, set, x, cfg);
        const Estimate d2 = fa_tail(b, set, x, cfg);
        const double den = d1.value + d2.value;
        if (num.zero_hit || den <= 0.0) {
            r.note = "budget exhausted before the grid tail";
            break;
        }
        r.grid.push_back(x);
        r.ratios.push_back(num.value / den);
        r.stderrs.push_back(ratio_std_error(
            num.value, num.std_error, den,
            std::sqrt(d1.std_error * d1.std_error + d2.std_error * d2.std_error)));
    }
    classify_trend(r, {.last_k = 3, .tol = 0.10, .require_monotone = false});
    return r;
}

TrendReport nfold_ratio(const VectorLaw& law, const RareSet& set, int n,
                        const std::vector<double>& x_grid, const EngineConfig& cfg) {
    if (n < 1) throw std::invalid_argument("nfold_ratio: need n >= 1");
    TrendReport r;
    r.target = 1.0;
    for (double x : x_grid) {
        Estimate num;
        if (n == 1) {
            num = analytic_estimate(1.0);  // ratio is identically 1
            r.grid.push_back(x);
            r.ratios.push_back(1.0);
            r.stderrs.push_back(0.0);
            continue;
        }
        num = nfold_tail(law, set, n, x, cfg);
        const Estimate den = fa_tail(law, set, x, cfg);
        if (num.zero_hit || den.zero_hit || den.value <= 0.0) {
            r.note = "budget exhausted before the grid tail";
            break;
        }
        r.grid.push_back(x);
        r.ratios.push_back(num.value / (n * den.value));
        r.stderrs.push_back(
            ratio_std_error(num.value, num.std_error, n * den.value, n * den.std_error));
    }
    classify_trend(r, {.last_k = 3, .tol = 0.15, .require_monotone = false});
    return r;
}

KestenTable kesten_table(const VectorLaw& law, const RareSet& set, double c, int n_max,
                         const std::vector<double>& x_mults, const EngineConfig& cfg) {
    KestenTable t;
    const MeanEstimate mu = fa_mean(law, set, 100'000, cfg);
    t.mu_fa = mu.value;
    t.c = c;
    if (!(c > mu.value))
        throw KestenPreconditionError("kesten_table: need c > mu_{F_A} (ViolatesKesten)");
    const double gamma = law.insensitivity_exponent();
    const InsensitivityFn h{gamma};

    // n ladder: 1, then roughly geometric up to n_max
    std::vector<int> ns{1};
    for (int n = 2; n <= n_max; n = n < 8 ? n + 2 : (3 * n) / 2) ns.push_back(n);
    if (ns.back() != n_max) ns.push_back(n_max);
    t.n_values = ns;

    for (int n : ns) {
        const Estimate denom_cn = fa_tail(law, set, c * n, cfg);
        const double thr = h.inverse(n * (mu.value + 1.0));
        double sup = 0.0;
        for (double m : x_mults) {
            const double x = m * thr;
            KestenTable::Row row;
            row.n = n;
            row.x = x;
            row.denom = denom_cn.value;
            if (n == 1) {
                row.ratio = 1.0;
                row.ratio_se = 0.0;
            } else {
                const Estimate num = nfold_tail(law, set, n, x, cfg);
                const Estimate den = fa_tail(law, set, x, cfg);
                if (den.zero_hit || den.value <= 0.0) continue;
                row.ratio = num.value / den.value;
                row.ratio_se = ratio_std_error(num.value, num.std_error, den.value, den.std_error);
            }
            row.k_value = row.ratio * denom_cn.value;
            sup = std::max(sup, row.k_value);
            t.rows.push_back(row);
        }
        t.per_n_sup.push_back(sup);
        t.sup_k = std::max(t.sup_k, sup);
    }
    const std::size_t m = t.per_n_sup.size();
    if (m >= 3) {
        const double s0 = t.per_n_sup[m - 3], s1 = t.per_n_sup[m - 2], s2 = t.per_n_sup[m - 1];
        const double slack = 1.15;
        t.bounded = s1 <= s0 * slack && s2 <= s1 * slack;
    }
    return t;
}

Estimate stopped_sum_tail(const StoppedSumModel& model, const RareSet& set, double x,
                          const EngineConfig& cfg) {
    if (model.tau.family() == Family::Degenerate && model.tau.param(0) < 1.0)
        return analytic_estimate(0.0);  // empty sum never enters xA for x > 0
    return estimate_rare(stopped_sum_path(model, set), x, cfg, cell_salt(0x57055ULL, 0, x));
}

BigJumpReport single_big_jump_report(const StoppedSumModel& model, const RareSet& set,
                                     const std::vector<double>& x_grid,
                                     const EngineConfig& cfg) {
    BigJumpReport out;
    if (!model.tau.has_finite_mean())
        throw InfMeanError("single_big_jump_report: E[tau] infinite");
    out.expected_tau = model.tau.mean();
    const MeanEstimate mu = fa_mean(model.vlaw, set, 100'000, cfg);
    out.c = mu.value + 1.0;

    out.main.target = 1.0;
    out.condition.target = 0.0;
    for (double x : x_grid) {
        const Estimate num = stopped_sum_tail(model, set, x, cfg);
        const Estimate den = fa_tail(model.vlaw, set, x, cfg);
        if (num.zero_hit || den.zero_hit || den.value <= 0.0) {
            out.main.note = "budget exhausted before the grid tail";
            break;
        }
        out.main.grid.push_back(x);
        out.main.ratios.push_back(num.value / (out.expected_tau * den.value));
        out.main.stderrs.push_back(ratio_std_error(num.value, num.std_error,
                                                   out.expected_tau * den.value,
                                                   out.expected_tau * den.std_error));
        out.condition.grid.push_back(x);
        out.condition.ratios.push_back(model.tau.tail(x / out.c) / den.value);
        out.condition.stderrs.push_back(
            model.tau.tail(x / out.c) / (den.value * den.value) * den.std_error);
    }
    classify_trend(out.main, {.last_k = 3, .tol = 0.20, .require_monotone = false});
    // condition: the ratio must shrink along the grid and end well below its start
    const auto& cr = out.condition.ratios;
    if (cr.size() >= 2) {
        bool decreasing = true;
        for (std::size_t i = 1; i < cr.size(); ++i)
            if (cr[i] > cr[i - 1] * 1.05) decreasing = false;
        out.condition_ok = decreasing && cr.back() <= 0.5 * cr.front();
        out.condition.verdict = out.condition_ok ? Verdict::Consistent : Verdict::Inconsistent;
        out.condition.max_dev_last_k = cr.back();
    }
    if (!out.condition_ok && out.main.note.empty()) out.main.note = "ConditionSuspect";
    return out;
}

double mrv_stopped_closed_form(const StoppedSumModel& model, const RareSet& set, double x) {
    if (model.vlaw.kind() != VectorKind::Mrv)
        throw std::invalid_argument("mrv_stopped_closed_form: law is not MRV");
    if (model.vlaw.alpha() <= 1.0)
        throw InfMeanError("mrv_stopped_closed_form: alpha <= 1 (MeanNotFinite)");
    if (!model.tau.has_finite_mean())
        throw InfMeanError("mrv_stopped_closed_form: E[tau] infinite");
    return model.tau.mean() * mu_A(model.vlaw, set) * model.vlaw.radial().tail(x);
}

}  // namespace raretail
