#include "raretail/rare_set.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace raretail {

RareSet::RareSet(std::vector<std::vector<double>> directions, std::string label)
    : directions_(std::move(directions)), label_(std::move(label)) {
    if (directions_.empty()) throw std::invalid_argument("RareSet: empty direction set");
    dim_ = static_cast<int>(directions_.front().size());
    if (dim_ <= 0) throw std::invalid_argument("RareSet: zero-dimensional direction");
    for (const auto& p : directions_) {
        if (static_cast<int>(p.size()) != dim_)
            throw std::invalid_argument("RareSet: inconsistent direction dimensions");
        double norm1 = 0.0;
        for (double v : p) {
            if (v < 0.0) throw std::invalid_argument("RareSet: negative direction component");
            norm1 += v;
        }
        if (norm1 <= 0.0) throw std::invalid_argument("RareSet: zero direction vector");
    }
}

RareSet RareSet::halfspace(const std::vector<double>& weights, double c) {
    if (c <= 0.0) throw std::invalid_argument("halfspace: need c > 0");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("halfspace: negative weight");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("halfspace: all-zero weights");
    std::vector<double> p(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) p[i] = weights[i] / c;
    return RareSet({p}, "halfspace");
}

RareSet RareSet::orthant_exceedance(const std::vector<double>& thresholds) {
    if (thresholds.empty()) throw std::invalid_argument("orthant: empty thresholds");
    std::vector<std::vector<double>> dirs;
    const std::size_t d = thresholds.size();
    for (std::size_t i = 0; i < d; ++i) {
        if (thresholds[i] <= 0.0) throw std::invalid_argument("orthant: need b_i > 0");
        std::vector<double> e(d, 0.0);
        e[i] = 1.0 / thresholds[i];
        dirs.push_back(std::move(e));
    }
    return RareSet(std::move(dirs), "orthant");
}

RareSet RareSet::ruin_translate(const std::vector<double>& allocation, RuinSetKind kind) {
    double sum = 0.0;
    for (double l : allocation) {
        if (l <= 0.0) throw std::invalid_argument("ruin_translate: need l_i > 0");
        sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("ruin_translate: allocation must sum to 1");
    if (kind == RuinSetKind::SumNegative) {
        // l - L1 = { x : sum x_i > sum l_i = 1 }
        const double d = static_cast<double>(allocation.size());
        std::vector<double> w(allocation.size(), 1.0 / d);
        RareSet s = halfspace(w, 1.0 / d);
        return RareSet(s.directions(), "ruin_sum");
    }
    RareSet s = orthant_exceedance(allocation);  // l - L2 = { x : x_i > l_i, some i }
    return RareSet(s.directions(), "ruin_any");
}

double RareSet::y_projection(const double* x, int n) const {
    if (n != dim_) throw std::invalid_argument("y_projection: dimension mismatch");
    double best = 0.0;
    for (const auto& p : directions_) {
        double dot = 0.0;
        for (int i = 0; i < dim_; ++i) dot += p[i] * x[i];
        if (dot > best) best = dot;
    }
    return best;
}

double RareSet::y_projection(const std::vector<double>& x) const {
    return y_projection(x.data(), static_cast<int>(x.size()));
}

bool RareSet::contains(const std::vector<double>& x, double scale) const {
    if (scale <= 0.0) throw std::invalid_argument("contains: need scale > 0");
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("contains: dimension mismatch");
    for (const auto& p : directions_) {
        double dot = 0.0;
        for (int i = 0; i < dim_; ++i) dot += p[i] * x[i];
        if (dot > scale) return true;
    }
    return false;
}

double RareSet::entry_scale(const std::vector<double>& direction) const {
    const double y = y_projection(direction);
    if (y <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / y;
}

RareSet RareSet::scaled(double lambda) const {
    if (lambda <= 0.0) throw std::invalid_argument("scaled: need lambda > 0");
    std::vector<std::vector<double>> dirs = directions_;
    for (auto& p : dirs)
        for (double& v : p) v /= lambda;
    return RareSet(std::move(dirs), label_);
}

}  // namespace raretail
