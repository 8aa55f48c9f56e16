#include "raretail/large_dev.hpp"

#include <cmath>
#include <cstring>

namespace raretail {

namespace {

constexpr long kArrivalGuard = 10'000'000;

class RandomSumPath final : public SplitPath {
  public:
    RandomSumPath(const VectorLaw& law, const CountingProcess& cp, const RareSet& set, double t)
        : law_(&law), cp_(&cp), set_(&set), t_(t), acc_(law.dim(), 0.0), buf_(law.dim(), 0.0) {}
    void reset() override {
        std::fill(acc_.begin(), acc_.end(), 0.0);
        clock_ = 0.0;
        k_ = 0;
        stat_ = 0.0;
    }
    bool step(Noise& rng) override {
        ++k_;
        clock_ += cp_->law(k_).sample(rng);
        if (clock_ > t_) return false;
        if (k_ >= kArrivalGuard) throw ArrivalOverflowError("random_sum_path: arrival guard");
        law_->sample(rng, buf_.data());
        for (int i = 0; i < law_->dim(); ++i) acc_[i] += buf_[i];
        stat_ = set_->y_projection(acc_);
        return true;
    }
    double statistic() const override { return stat_; }

  private:
    const VectorLaw* law_;
    const CountingProcess* cp_;
    const RareSet* set_;
    double t_;
    std::vector<double> acc_, buf_;
    double clock_ = 0.0;
    long k_ = 0;
    double stat_ = 0.0;
};

std::uint64_t cell_salt(std::uint64_t op, long n, double x) {
    std::uint64_t xb;
    std::memcpy(&xb, &x, sizeof xb);
    return compose_id(op, static_cast<std::uint64_t>(n), xb);
}

void finalize_surface(Surface& s) {
    s.max_dev_by_mult.assign(s.x_mults.size(), 0.0);
    s.max_dev = 0.0;
    for (const SurfaceCell& c : s.cells) {
        if (!c.reachable) continue;
        const double dev = std::abs(c.ratio - 1.0);
        s.max_dev = std::max(s.max_dev, dev);
        for (std::size_t j = 0; j < s.x_mults.size(); ++j)
            if (c.x_mult == s.x_mults[j]) s.max_dev_by_mult[j] = std::max(s.max_dev_by_mult[j], dev);
    }
}

}  // namespace

PathFactory random_sum_path(const VectorLaw& law, const CountingProcess& cp, const RareSet& set,
                            double t) {
    if (law.dim() != set.dim())
        throw std::invalid_argument("random_sum_path: dimension mismatch");
    return [&law, &cp, &set, t] { return std::make_unique<RandomSumPath>(law, cp, set, t); };
}

Estimate random_sum_tail(const VectorLaw& law, const CountingProcess& cp, const RareSet& set,
                         double t, double x, const EngineConfig& cfg) {
    return estimate_rare(random_sum_path(law, cp, set, t), x, cfg, cell_salt(0xD157ULL, 0, x));
}

Surface pld_fixed_n_surface(const VectorLaw& law, const RareSet& set,
                            const std::vector<int>& n_list, const std::vector<double>& x_mults,
                            const EngineConfig& cfg) {
    for (double m : x_mults)
        if (m < 1.0) throw std::invalid_argument("pld surface: x_mult must be >= 1");
    Surface s;
    s.x_mults = x_mults;
    const MeanEstimate mu = fa_mean(law, set, 100'000, cfg);
    s.mu_fa = mu.value;
    s.gamma = law.insensitivity_exponent();
    const InsensitivityFn h{s.gamma};
    for (int n : n_list) {
        const double thr = h.inverse(n * (mu.value + 1.0));
        for (double m : x_mults) {
            SurfaceCell c;
            c.n_or_lambda = n;
            c.x_mult = m;
            c.threshold = thr;
            c.x = m * thr;
            c.single_tail = fa_tail(law, set, c.x, cfg);
            c.sum_tail = n == 1 ? c.single_tail
                                : estimate_rare(fixed_sum_path(law, set, n), c.x, cfg,
                                                cell_salt(0x5F01DULL, n, c.x));
            c.target = n * c.single_tail.value;
            if (c.sum_tail.zero_hit || c.single_tail.zero_hit || c.target <= 0.0) {
                c.reachable = false;  // marked, never silently skipped
            } else {
                c.ratio = c.sum_tail.value / c.target;
                c.ratio_se = ratio_std_error(c.sum_tail.value, c.sum_tail.std_error, c.target,
                                             n * c.single_tail.std_error);
            }
            s.cells.push_back(c);
        }
    }
    finalize_surface(s);
    return s;
}

Surface pld_random_surface(const VectorLaw& law, const CountingProcess& cp, const RareSet& set,
                           const std::vector<double>& t_list, const std::vector<double>& x_mults,
                           const EngineConfig& cfg) {
    for (double m : x_mults)
        if (m < 1.0) throw std::invalid_argument("pld surface: x_mult must be >= 1");
    Surface s;
    s.x_mults = x_mults;
    const MeanEstimate mu = fa_mean(law, set, 100'000, cfg);
    s.mu_fa = mu.value;
    s.gamma = law.insensitivity_exponent();
    const InsensitivityFn h{s.gamma};
    for (double t : t_list) {
        const MeanEstimate2 lam = lambda_mean(cp, t, 20'000, cfg);
        const long L = static_cast<long>(std::floor(lam.value));
        if (L < 1) throw std::invalid_argument("pld_random_surface: floor(lambda(t)) < 1");
        const double thr = h.inverse(static_cast<double>(L) * (mu.value + 1.0));
        for (double m : x_mults) {
            SurfaceCell c;
            c.n_or_lambda = t;
            c.x_mult = m;
            c.threshold = thr;
            c.x = m * thr;
            c.single_tail = fa_tail(law, set, c.x, cfg);
            // same cell salt as the fixed-n surface at n = floor(lambda(t)):
            // with degenerate arrivals the two estimates coincide bit for bit
            c.sum_tail = estimate_rare(random_sum_path(law, cp, set, t), c.x, cfg,
                                       cell_salt(0x5F01DULL, L, c.x));
            c.target = static_cast<double>(L) * c.single_tail.value;
            if (c.sum_tail.zero_hit || c.single_tail.zero_hit || c.target <= 0.0) {
                c.reachable = false;
            } else {
                c.ratio = c.sum_tail.value / c.target;
                c.ratio_se = ratio_std_error(c.sum_tail.value, c.sum_tail.std_error, c.target,
                                             static_cast<double>(L) * c.single_tail.std_error);
            }
            s.cells.push_back(c);
        }
    }
    finalize_surface(s);
    return s;
}

double pld_mrv_closed_form(const VectorLaw& law, const RareSet& set, double n_or_lambda,
                           double x) {
    if (law.kind() != VectorKind::Mrv)
        throw std::invalid_argument("pld_mrv_closed_form: law is not MRV");
    if (law.alpha() <= 1.0) throw InfMeanError("pld_mrv_closed_form: alpha <= 1");
    return n_or_lambda * mu_A(law, set) * law.radial().tail(x);
}

}  // namespace raretail
