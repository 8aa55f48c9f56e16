#include "raretail/vector_law.hpp"

#include <cmath>
#include <stdexcept>

namespace raretail {

ScalarLaw lighter_law(const ScalarLaw& law) {
    switch (law.family()) {
        case Family::Pareto:
            return ScalarLaw::pareto(law.param(0) + 1.0, law.param(1));
        case Family::Weibull:
            return ScalarLaw::weibull(law.param(0), 0.5 * law.param(1));
        case Family::Lognormal:
            return ScalarLaw::lognormal(law.param(0), 0.5 * law.param(1));
        case Family::Exponential:
            return ScalarLaw::exponential(2.0 * law.param(0));
        case Family::Geometric:
            return ScalarLaw::geometric(std::min(1.0, 2.0 * law.param(0)));
        case Family::Degenerate:
            return law;
    }
    return law;
}

VectorLaw VectorLaw::independent(std::vector<ScalarLaw> marginals) {
    if (marginals.empty()) throw std::invalid_argument("independent: no marginals");
    VectorLaw v;
    v.kind_ = VectorKind::Independent;
    v.dim_ = static_cast<int>(marginals.size());
    v.marginals_ = std::move(marginals);
    return v;
}

VectorLaw VectorLaw::lwqd(int dim, const ScalarLaw& common, double shock_weight) {
    if (dim < 1) throw std::invalid_argument("lwqd: need dim >= 1");
    if (shock_weight < 0.0 || shock_weight >= 1.0)
        throw std::invalid_argument("lwqd: need shock weight in [0,1)");
    VectorLaw v;
    v.kind_ = VectorKind::Lwqd;
    v.dim_ = dim;
    v.marginals_ = {common};
    v.shock_ = lighter_law(common);
    v.shock_weight_ = shock_weight;
    return v;
}

VectorLaw VectorLaw::mrv(int dim, double alpha, const ScalarLaw& radial,
                         std::vector<double> axis_weights, double diag_weight) {
    if (dim < 1) throw std::invalid_argument("mrv: need dim >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("mrv: need alpha > 0");
    if (radial.family() != Family::Pareto || radial.param(0) != alpha)
        throw std::invalid_argument("mrv: radial law must be Pareto with matching alpha");
    if (static_cast<int>(axis_weights.size()) != dim)
        throw std::invalid_argument("mrv: need one axis weight per dimension");
    double total = diag_weight;
    for (double w : axis_weights) {
        if (w < 0.0) throw std::invalid_argument("mrv: negative angular weight");
        total += w;
    }
    if (diag_weight < 0.0 || std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mrv: angular weights must sum to 1");
    VectorLaw v;
    v.kind_ = VectorKind::Mrv;
    v.dim_ = dim;
    v.alpha_ = alpha;
    v.radial_ = radial;
    v.axis_weights_ = std::move(axis_weights);
    v.diag_weight_ = diag_weight;
    return v;
}

void VectorLaw::sample(Noise& noise, double* out) const {
    switch (kind_) {
        case VectorKind::Independent:
            for (int i = 0; i < dim_; ++i) out[i] = marginals_[i].sample(noise);
            return;
        case VectorKind::Lwqd: {
            const double s = shock_weight_ > 0.0 ? shock_weight_ * shock_->sample(noise) : 0.0;
            for (int i = 0; i < dim_; ++i) out[i] = marginals_.front().sample(noise) + s;
            return;
        }
        case VectorKind::Mrv: {
            const double u = noise.u01();
            const double r = radial_->sample(noise);
            double acc = 0.0;
            for (int i = 0; i < dim_; ++i) {
                acc += axis_weights_[i];
                if (u < acc) {
                    for (int j = 0; j < dim_; ++j) out[j] = (j == i) ? r : 0.0;
                    return;
                }
            }
            const double c = r / std::sqrt(static_cast<double>(dim_));
            for (int j = 0; j < dim_; ++j) out[j] = c;
            return;
        }
    }
}

void VectorLaw::sample(RngStream& rng, double* out) const {
    StreamNoise noise(rng);
    sample(noise, out);
}

std::vector<double> VectorLaw::sample(RngStream& rng) const {
    std::vector<double> out(dim_);
    sample(rng, out.data());
    return out;
}

double VectorLaw::component_mean(int i) const {
    switch (kind_) {
        case VectorKind::Independent:
            return marginals_[i].mean();
        case VectorKind::Lwqd:
            return marginals_.front().mean() + shock_weight_ * shock_->mean();
        case VectorKind::Mrv:
            return radial_->mean() *
                   (axis_weights_[i] + diag_weight_ / std::sqrt(static_cast<double>(dim_)));
    }
    return 0.0;
}

bool VectorLaw::has_finite_component_means() const {
    switch (kind_) {
        case VectorKind::Independent:
            for (const auto& m : marginals_)
                if (!m.has_finite_mean()) return false;
            return true;
        case VectorKind::Lwqd:
            return marginals_.front().has_finite_mean() && shock_->has_finite_mean();
        case VectorKind::Mrv:
            return radial_->has_finite_mean();
    }
    return true;
}

double VectorLaw::insensitivity_exponent() const {
    double g = 0.9;
    if (kind_ == VectorKind::Mrv) return radial_->default_insensitivity_exponent();
    for (const auto& m : marginals_) g = std::min(g, m.default_insensitivity_exponent());
    if (kind_ == VectorKind::Lwqd) g = std::min(g, marginals_.front().default_insensitivity_exponent());
    return g;
}

namespace {

class VectorPath final : public SplitPath {
  public:
    VectorPath(const VectorLaw& law, const RareSet& set) : law_(&law), set_(&set) {
        buf_.assign(law.dim(), 0.0);
    }
    void reset() override {
        std::fill(buf_.begin(), buf_.end(), 0.0);
        step_ = 0;
        shock_ = 0.0;
        radius_pending_ = false;
        stat_ = 0.0;
    }
    bool step(Noise& rng) override {
        const int d = law_->dim();
        switch (law_->kind()) {
            case VectorKind::Independent: {
                buf_[step_] = law_->marginals()[step_].sample(rng);
                ++step_;
                stat_ = set_->y_projection(buf_);
                return step_ < d;
            }
            case VectorKind::Lwqd: {
                if (step_ == 0) {
                    shock_ = law_->shock_weight() > 0.0
                                 ? law_->shock_weight() * law_->shock_law().sample(rng)
                                 : 0.0;
                    ++step_;
                    return true;
                }
                buf_[step_ - 1] = law_->common().sample(rng) + shock_;
                ++step_;
                stat_ = set_->y_projection(buf_);
                return step_ < d + 1;
            }
            case VectorKind::Mrv: {
                if (step_ == 0) {
                    const double u = rng.u01();
                    double acc = 0.0;
                    dir_axis_ = -1;
                    for (int i = 0; i < d; ++i) {
                        acc += law_->axis_weights()[i];
                        if (u < acc) {
                            dir_axis_ = i;
                            break;
                        }
                    }
                    ++step_;
                    radius_pending_ = true;
                    return true;
                }
                const double r = law_->radial().sample(rng);
                if (dir_axis_ >= 0) {
                    buf_[dir_axis_] = r;
                } else {
                    const double c = r / std::sqrt(static_cast<double>(d));
                    std::fill(buf_.begin(), buf_.end(), c);
                }
                radius_pending_ = false;
                ++step_;
                stat_ = set_->y_projection(buf_);
                return false;
            }
        }
        return false;
    }
    double statistic() const override { return stat_; }

  private:
    const VectorLaw* law_;
    const RareSet* set_;
    std::vector<double> buf_;
    int step_ = 0;
    double shock_ = 0.0;
    double stat_ = 0.0;
    int dir_axis_ = -1;
    bool radius_pending_ = false;
};

// axis-aligned direction sets: every direction touches exactly one axis
bool is_axis_aligned(const RareSet& set, std::vector<double>& thresholds) {
    thresholds.assign(set.dim(), 0.0);
    std::vector<bool> seen(set.dim(), false);
    for (const auto& p : set.directions()) {
        int axis = -1;
        for (int i = 0; i < set.dim(); ++i) {
            if (p[i] > 0.0) {
                if (axis >= 0) return false;
                axis = i;
            }
        }
        if (axis < 0 || seen[axis]) return false;
        seen[axis] = true;
        thresholds[axis] = 1.0 / p[axis];
    }
    for (bool s : seen)
        if (!s) return false;
    return true;
}

}  // namespace

PathFactory single_vector_path(const VectorLaw& law, const RareSet& set) {
    if (law.dim() != set.dim())
        throw std::invalid_argument("single_vector_path: dimension mismatch");
    return [&law, &set] { return std::make_unique<VectorPath>(law, set); };
}

Estimate fa_tail(const VectorLaw& law, const RareSet& set, double x, const EngineConfig& cfg) {
    if (law.dim() != set.dim()) throw std::invalid_argument("fa_tail: dimension mismatch");
    if (!(x > 0.0)) throw std::invalid_argument("fa_tail: need x > 0");
    if (law.kind() == VectorKind::Mrv) {
        // P[R Y_A(D) > x] summed over the atomic directions
        double p = 0.0;
        const int d = law.dim();
        for (int i = 0; i < d; ++i) {
            std::vector<double> e(d, 0.0);
            e[i] = 1.0;
            const double y = set.y_projection(e);
            if (y > 0.0) p += law.axis_weights()[i] * law.radial().tail(x / y);
        }
        if (law.diag_weight() > 0.0) {
            std::vector<double> u(d, 1.0 / std::sqrt(static_cast<double>(d)));
            const double y = set.y_projection(u);
            if (y > 0.0) p += law.diag_weight() * law.radial().tail(x / y);
        }
        return analytic_estimate(p);
    }
    std::vector<double> b;
    if (law.kind() == VectorKind::Independent && is_axis_aligned(set, b)) {
        double miss = 1.0;
        for (int i = 0; i < law.dim(); ++i) miss *= 1.0 - law.marginals()[i].tail(b[i] * x);
        return analytic_estimate(1.0 - miss);
    }
    return estimate_rare(single_vector_path(law, set), x, cfg,
                         compose_id(0xFA7A11ULL, static_cast<std::uint64_t>(x * 4096.0)));
}

MeanEstimate fa_mean(const VectorLaw& law, const RareSet& set, long budget,
                     const EngineConfig& cfg) {
    if (law.dim() != set.dim()) throw std::invalid_argument("fa_mean: dimension mismatch");
    if (!law.has_finite_component_means())
        throw InfMeanError("fa_mean: a marginal mean is infinite");
    MeanEstimate out;
    if (law.kind() == VectorKind::Mrv) {
        double y_mean = 0.0;
        const int d = law.dim();
        for (int i = 0; i < d; ++i) {
            std::vector<double> e(d, 0.0);
            e[i] = 1.0;
            y_mean += law.axis_weights()[i] * set.y_projection(e);
        }
        if (law.diag_weight() > 0.0) {
            std::vector<double> u(d, 1.0 / std::sqrt(static_cast<double>(d)));
            y_mean += law.diag_weight() * set.y_projection(u);
        }
        out.value = law.radial().mean() * y_mean;
        return out;
    }
    if (set.directions().size() == 1) {  // linear projection: expectation is exact
        const auto& p = set.directions().front();
        double m = 0.0;
        for (int i = 0; i < law.dim(); ++i) m += p[i] * law.component_mean(i);
        out.value = m;
        return out;
    }
    // sample mean of Y_A
    out.method = Method::Crude;
    out.n = std::max<long>(budget, 2);
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> buf(law.dim());
    const std::uint64_t base = compose_id(stream_id(cfg.module_tag, 0), 0xFAFEEDULL);
    for (long i = 0; i < out.n; ++i) {
        RngStream rng(cfg.seed, compose_id(base, static_cast<std::uint64_t>(i)));
        law.sample(rng, buf.data());
        const double y = set.y_projection(buf);
        sum += y;
        sumsq += y * y;
    }
    out.value = sum / static_cast<double>(out.n);
    const double var = std::max(0.0, sumsq / out.n - out.value * out.value);
    out.std_error = std::sqrt(var / static_cast<double>(out.n));
    return out;
}

double mu_A(const VectorLaw& law, const RareSet& set) {
    if (law.kind() != VectorKind::Mrv) throw std::invalid_argument("mu_A: law is not MRV");
    if (law.dim() != set.dim()) throw std::invalid_argument("mu_A: dimension mismatch");
    const int d = law.dim();
    double mu = 0.0;
    for (int i = 0; i < d; ++i) {
        std::vector<double> e(d, 0.0);
        e[i] = 1.0;
        const double t = set.entry_scale(e);
        if (std::isfinite(t)) mu += law.axis_weights()[i] * std::pow(t, -law.alpha());
    }
    if (law.diag_weight() > 0.0) {
        std::vector<double> u(d, 1.0 / std::sqrt(static_cast<double>(d)));
        const double t = set.entry_scale(u);
        if (std::isfinite(t)) mu += law.diag_weight() * std::pow(t, -law.alpha());
    }
    return mu;
}

}  // namespace raretail
