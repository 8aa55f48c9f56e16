#include "raretail/scalar_law.hpp"

#include <algorithm>
#include <cmath>

#include "raretail/quadrature.hpp"

namespace raretail {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}
}  // namespace

double normal_tail(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// Acklam's rational approximation followed by one Halley refinement against
// erfc; relative error well below 1e-13 across (0,1).
double inverse_normal_cdf(double p) {
    require(p > 0.0 && p < 1.0, "inverse_normal_cdf: p outside (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step
    const double e = (1.0 - normal_tail(x)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double InsensitivityFn::operator()(double x) const {
    return x <= 0.0 ? 0.0 : std::pow(x, gamma);
}

double InsensitivityFn::inverse(double y) const {
    return y <= 0.0 ? 0.0 : std::pow(y, 1.0 / gamma);
}

ScalarLaw ScalarLaw::pareto(double alpha, double xm) {
    require(alpha > 0.0 && xm > 0.0, "pareto: need alpha > 0, xm > 0");
    return {Family::Pareto, alpha, xm};
}
ScalarLaw ScalarLaw::weibull(double shape, double scale) {
    require(shape > 0.0 && scale > 0.0, "weibull: need shape > 0, scale > 0");
    return {Family::Weibull, shape, scale};
}
ScalarLaw ScalarLaw::lognormal(double mu, double sigma) {
    require(sigma > 0.0, "lognormal: need sigma > 0");
    return {Family::Lognormal, mu, sigma};
}
ScalarLaw ScalarLaw::exponential(double rate) {
    require(rate > 0.0, "exponential: need rate > 0");
    return {Family::Exponential, rate, 0.0};
}
ScalarLaw ScalarLaw::geometric(double p) {
    require(p > 0.0 && p <= 1.0, "geometric: need p in (0,1]");
    return {Family::Geometric, p, 0.0};
}
ScalarLaw ScalarLaw::degenerate(double value) {
    require(value >= 0.0, "degenerate: need value >= 0");
    return {Family::Degenerate, value, 0.0};
}

std::string ScalarLaw::describe() const {
    char buf[96];
    switch (family_) {
        case Family::Pareto: std::snprintf(buf, sizeof buf, "pareto(%g,%g)", a_, b_); break;
        case Family::Weibull: std::snprintf(buf, sizeof buf, "weibull(%g,%g)", a_, b_); break;
        case Family::Lognormal: std::snprintf(buf, sizeof buf, "lognormal(%g,%g)", a_, b_); break;
        case Family::Exponential: std::snprintf(buf, sizeof buf, "exponential(%g)", a_); break;
        case Family::Geometric: std::snprintf(buf, sizeof buf, "geometric(%g)", a_); break;
        case Family::Degenerate: std::snprintf(buf, sizeof buf, "degenerate(%g)", a_); break;
    }
    return buf;
}

double ScalarLaw::tail(double x) const {
    switch (family_) {
        case Family::Pareto:
            return x <= b_ ? 1.0 : std::pow(b_ / x, a_);
        case Family::Weibull:
            return x <= 0.0 ? 1.0 : std::exp(-std::pow(x / b_, a_));
        case Family::Lognormal:
            return x <= 0.0 ? 1.0 : normal_tail((std::log(x) - a_) / b_);
        case Family::Exponential:
            return x <= 0.0 ? 1.0 : std::exp(-a_ * x);
        case Family::Geometric: {
            if (x < 0.0) return 1.0;
            const double k = std::floor(x);
            return std::pow(1.0 - a_, k);
        }
        case Family::Degenerate:
            return x < a_ ? 1.0 : 0.0;
    }
    return 0.0;
}

double ScalarLaw::quantile_of_tail(double p) const {
    require(p > 0.0 && p <= 1.0, "quantile_of_tail: p outside (0,1]");
    switch (family_) {
        case Family::Pareto:
            return b_ * std::pow(p, -1.0 / a_);
        case Family::Weibull:
            return b_ * std::pow(-std::log(p), 1.0 / a_);
        case Family::Lognormal:
            return std::exp(a_ + b_ * inverse_normal_cdf(1.0 - p));
        case Family::Exponential:
            return -std::log(p) / a_;
        case Family::Geometric: {
            if (a_ == 1.0) return 1.0;
            // smallest integer k >= 1 with (1-p_geom)^k <= p
            const double k = std::ceil(std::log(p) / std::log1p(-a_) - 1e-12);
            return std::max(1.0, k) ;
        }
        case Family::Degenerate:
            return a_;
    }
    return 0.0;
}

bool ScalarLaw::has_density() const {
    return family_ == Family::Pareto || family_ == Family::Weibull ||
           family_ == Family::Lognormal || family_ == Family::Exponential;
}

double ScalarLaw::density(double x) const {
    switch (family_) {
        case Family::Pareto:
            return x < b_ ? 0.0 : a_ * std::pow(b_, a_) * std::pow(x, -a_ - 1.0);
        case Family::Weibull: {
            if (x <= 0.0) return 0.0;
            const double z = std::pow(x / b_, a_);
            return (a_ / b_) * std::pow(x / b_, a_ - 1.0) * std::exp(-z);
        }
        case Family::Lognormal: {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - a_) / b_;
            return std::exp(-0.5 * z * z) / (x * b_ * std::sqrt(2.0 * M_PI));
        }
        case Family::Exponential:
            return x < 0.0 ? 0.0 : a_ * std::exp(-a_ * x);
        default:
            throw std::logic_error("density: law has no density");
    }
}

bool ScalarLaw::has_finite_mean() const {
    if (family_ == Family::Pareto) return a_ > 1.0;
    return true;
}

double ScalarLaw::mean() const {
    switch (family_) {
        case Family::Pareto:
            if (a_ <= 1.0) throw InfMeanError("pareto mean infinite for alpha <= 1");
            return a_ * b_ / (a_ - 1.0);
        case Family::Weibull:
            return b_ * std::tgamma(1.0 + 1.0 / a_);
        case Family::Lognormal:
            return std::exp(a_ + 0.5 * b_ * b_);
        case Family::Exponential:
            return 1.0 / a_;
        case Family::Geometric:
            return 1.0 / a_;
        case Family::Degenerate:
            return a_;
    }
    return 0.0;
}

double ScalarLaw::sample(RngStream& rng) const {
    if (family_ == Family::Degenerate) return a_;  // consumes no randomness
    return sample_u(rng.next_u01());
}

double ScalarLaw::sample(Noise& noise) const {
    if (family_ == Family::Degenerate) return a_;  // consumes no randomness
    return sample_u(noise.u01());
}

double ScalarLaw::sample_u(double u) const {
    switch (family_) {
        case Family::Pareto:
            return b_ * std::pow(u, -1.0 / a_);
        case Family::Weibull:
            return b_ * std::pow(-std::log(u), 1.0 / a_);
        case Family::Lognormal:
            return std::exp(a_ + b_ * inverse_normal_cdf(u));
        case Family::Exponential:
            return -std::log(u) / a_;
        case Family::Geometric: {
            if (a_ == 1.0) return 1.0;
            return 1.0 + std::floor(std::log(u) / std::log1p(-a_));
        }
        default:
            return a_;
    }
}

double ScalarLaw::truncated_tail_integral(double x, double u) const {
    require(u >= 1.0, "truncated_tail_integral: need u >= 1");
    require(x >= 0.0, "truncated_tail_integral: need x >= 0");
    const double hi = x + u;
    double val = 0.0;
    switch (family_) {
        case Family::Pareto: {
            // integral of tail: t below xm plus xm^alpha * y^{1-alpha}/(1-alpha) above
            auto anti = [&](double lo, double up) {
                double s = 0.0;
                const double l1 = std::min(up, b_);
                if (lo < l1) s += l1 - lo;
                const double l2 = std::max(lo, b_);
                if (up > l2) {
                    if (a_ == 1.0)
                        s += b_ * (std::log(up) - std::log(l2));
                    else
                        s += std::pow(b_, a_) *
                             (std::pow(l2, 1.0 - a_) - std::pow(up, 1.0 - a_)) / (a_ - 1.0);
                }
                return s;
            };
            val = anti(x, hi);
            break;
        }
        case Family::Exponential: {
            val = (std::exp(-a_ * x) - std::exp(-a_ * hi)) / a_;
            break;
        }
        case Family::Degenerate: {
            val = std::max(0.0, std::min(hi, a_) - std::min(x, a_));
            break;
        }
        case Family::Geometric: {
            // piecewise-constant tail; sum the full and partial unit cells
            double s = 0.0;
            double lo = x;
            while (lo < hi) {
                const double next = std::min(hi, std::floor(lo) + 1.0);
                s += tail(lo) * (next - lo);
                lo = next;
                if (s >= 1.0) break;
            }
            val = s;
            break;
        }
        default: {
            auto f = [&](double y) { return tail(y); };
            val = integrate_segmented(f, geometric_breakpoints(x, hi), 1e-10, 1e-9).value;
            break;
        }
    }
    return std::min(1.0, val);
}

double ScalarLaw::default_insensitivity_exponent() const {
    switch (family_) {
        case Family::Pareto:
        case Family::Lognormal:
            return 0.9;
        case Family::Weibull:
            // tail(x - h)/tail(x) -> 1 needs h = o(x^{1-shape}); stay safely
            // inside that boundary while keeping thresholds low
            return std::min(0.9, 0.95 * (1.0 - a_));
        default:
            return 0.9;
    }
}

bool ScalarLaw::is_long_tailed() const {
    switch (family_) {
        case Family::Pareto:
        case Family::Lognormal:
            return true;
        case Family::Weibull:
            return a_ < 1.0;
        default:
            return false;
    }
}

InsensitivityFn ScalarLaw::insensitivity() const {
    if (!is_long_tailed())
        throw std::invalid_argument("insensitivity: law is not tagged long-tailed");
    return InsensitivityFn{default_insensitivity_exponent()};
}

}  // namespace raretail
