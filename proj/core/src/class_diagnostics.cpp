#include "raretail/class_diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "raretail/quadrature.hpp"

namespace raretail {

namespace {

// breakpoints for integrals of density-weighted integrands on [lo, hi]:
// geometric refinement toward both ends plus the support edge of the law
std::vector<double> conv_breakpoints(const ScalarLaw& law, double lo, double hi) {
    double scale = 1.0;
    if (law.family() == Family::Pareto) scale = law.param(1);
    std::vector<double> pts = geometric_breakpoints(lo, hi, std::min(scale, 1.0));
    if (law.family() == Family::Pareto) {
        const double xm = law.param(1);
        if (xm > lo && xm < hi) pts.push_back(xm);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

std::vector<double> diagnostic_grid(const ScalarLaw& law, const DiagnosticOptions& opts) {
    std::vector<double> grid;
    double x = opts.x0;
    for (int k = 0; k < opts.points; ++k, x *= 2.0) {
        if (law.tail(x) < opts.underflow_floor) break;  // underflow guard
        grid.push_back(x);
    }
    return grid;
}

TrendReport long_tail_ratio(const ScalarLaw& law, double a, const DiagnosticOptions& opts) {
    if (a < 0.0) throw std::invalid_argument("long_tail_ratio: need a >= 0");
    TrendReport r;
    r.target = 1.0;
    r.grid = diagnostic_grid(law, opts);
    for (double x : r.grid) r.ratios.push_back(law.tail(x - a) / law.tail(x));
    classify_trend(r, {.last_k = opts.last_k, .tol = opts.tol_shift});
    return r;
}

TrendReport dominated_variation_ratio(const ScalarLaw& law, double b,
                                      const DiagnosticOptions& opts) {
    if (!(b > 0.0 && b < 1.0))
        throw std::invalid_argument("dominated_variation_ratio: need b in (0,1)");
    TrendReport r;
    r.target = 1.0;  // unused by the boundedness rule
    r.grid = diagnostic_grid(law, opts);
    for (double x : r.grid) r.ratios.push_back(law.tail(b * x) / law.tail(x));
    classify_bounded(r, opts.last_k, opts.spread_tol);
    return r;
}

TrendReport rv_ratio(const ScalarLaw& law, double t, std::optional<double> target,
                     const DiagnosticOptions& opts) {
    if (t <= 0.0) throw std::invalid_argument("rv_ratio: need t > 0");
    TrendReport r;
    if (target)
        r.target = *target;
    else if (law.family() == Family::Pareto)
        r.target = std::pow(t, -law.param(0));
    else
        throw std::invalid_argument("rv_ratio: target required for non-Pareto families");
    r.grid = diagnostic_grid(law, opts);
    for (double x : r.grid) r.ratios.push_back(law.tail(t * x) / law.tail(x));
    classify_trend(r, {.last_k = opts.last_k, .tol = opts.tol_shift});
    return r;
}

double twofold_convolution_tail(const ScalarLaw& law, double x) {
    // P[Z1+Z2 > x] = 2 P[Z1 <= x/2, Z1+Z2 > x] + P[Z1 > x/2]^2
    if (x <= 0.0) return 1.0;
    const double half = 0.5 * x;
    auto f = [&](double y) { return law.tail(x - y) * law.density(y); };
    const double inner = integrate_segmented(f, conv_breakpoints(law, 0.0, half), 0.0, 1e-10).value;
    const double th = law.tail(half);
    return 2.0 * inner + th * th;
}

TrendReport subexp_ratio(const ScalarLaw& law, const DiagnosticOptions& opts) {
    if (!law.has_density())
        throw std::invalid_argument("subexp_ratio: law needs a density (continuous support)");
    TrendReport r;
    r.target = 2.0;
    r.grid = diagnostic_grid(law, opts);
    for (double x : r.grid) r.ratios.push_back(twofold_convolution_tail(law, x) / law.tail(x));
    classify_trend(r, {.last_k = opts.last_k, .tol = opts.tol_conv});
    return r;
}

double strong_subexp_integral(const ScalarLaw& law, double x) {
    // integrand symmetric about x/2, so integrate half and double
    const double half = 0.5 * x;
    auto f = [&](double y) { return law.tail(x - y) * law.tail(y); };
    return 2.0 * integrate_segmented(f, conv_breakpoints(law, 0.0, half), 0.0, 1e-10).value;
}

TrendReport strong_subexp_ratio(const ScalarLaw& law, const DiagnosticOptions& opts) {
    if (!law.has_finite_mean()) throw InfMeanError("strong_subexp_ratio: infinite mean");
    const double mu = law.mean();
    TrendReport r;
    r.target = 1.0;
    r.grid = diagnostic_grid(law, opts);
    for (double x : r.grid)
        r.ratios.push_back(strong_subexp_integral(law, x) / (2.0 * mu * law.tail(x)));
    classify_trend(r, {.last_k = opts.last_k, .tol = opts.tol_conv});
    return r;
}

TruncatedTailLaw make_truncated_law(const ScalarLaw& law, double u) {
    TruncatedTailLaw vu{&law, u, 0.0, 0.0};
    const double at0 = law.truncated_tail_integral(0.0, u);
    if (at0 < 1.0) {
        vu.atom0 = 1.0 - at0;
        vu.clamp_end = 0.0;
        return vu;
    }
    // find the clamp boundary: largest x with int_x^{x+u} tail = 1
    double lo = 0.0, hi = 1.0;
    while (law.truncated_tail_integral(hi, u) >= 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (law.truncated_tail_integral(mid, u) >= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    vu.clamp_end = lo;
    return vu;
}

double TruncatedTailLaw::tail(double x) const {
    if (x <= 0.0) return std::min(1.0, parent->truncated_tail_integral(0.0, u));
    return parent->truncated_tail_integral(x, u);
}

double TruncatedTailLaw::density(double x) const {
    if (x <= clamp_end) return 0.0;
    return std::max(0.0, parent->tail(x) - parent->tail(x + u));
}

double twofold_truncated_tail(const TruncatedTailLaw& vu, double x) {
    if (x <= 0.0) return 1.0;
    const double half = 0.5 * x;
    auto f = [&](double y) { return vu.tail(x - y) * vu.density(y); };
    std::vector<double> pts = geometric_breakpoints(0.0, half, 1.0);
    if (vu.clamp_end > 0.0 && vu.clamp_end < half) pts.push_back(vu.clamp_end);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double inner = integrate_segmented(f, pts, 0.0, 1e-10).value;
    const double th = vu.tail(half);
    return 2.0 * (vu.atom0 * vu.tail(x) + inner) + th * th;
}

StronglySubexpReport strongly_subexp_ratio(const ScalarLaw& law, std::vector<double> u_grid,
                                           const DiagnosticOptions& opts) {
    if (!law.has_finite_mean()) throw InfMeanError("strongly_subexp_ratio: infinite mean");
    if (u_grid.empty()) u_grid = {1.0, 2.0, 5.0, 10.0, 100.0, 1e6};
    StronglySubexpReport out;
    out.u_grid = u_grid;
    out.note = "uniformity sampled on a finite u-grid; largest u proxies u -> infinity";
    bool all_consistent = true;
    for (double u : u_grid) {
        const TruncatedTailLaw vu = make_truncated_law(law, u);
        TrendReport r;
        r.target = 2.0;
        // grid guard on the truncated tail itself
        double x = opts.x0;
        for (int k = 0; k < opts.points; ++k, x *= 2.0) {
            const double t = vu.tail(x);
            if (t < opts.underflow_floor) break;
            r.grid.push_back(x);
            r.ratios.push_back(twofold_truncated_tail(vu, x) / t);
        }
        classify_trend(r, {.last_k = opts.last_k, .tol = opts.tol_conv});
        if (!r.grid.empty())
            out.uniform_max_dev =
                std::max(out.uniform_max_dev,
                         std::abs(r.ratios.back() - r.target) / r.target);
        if (r.verdict != Verdict::Consistent) all_consistent = false;
        out.per_u.push_back(std::move(r));
    }
    out.verdict = all_consistent ? Verdict::Consistent : Verdict::Inconsistent;
    return out;
}

}  // namespace raretail
