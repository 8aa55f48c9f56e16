#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "raretail/rng.hpp"

namespace raretail {

// Thrown when an operation needs a finite mean the law does not have.
struct InfMeanError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Family { Pareto, Weibull, Lognormal, Exponential, Geometric, Degenerate };

// h(x) = x^gamma with gamma in (0,1); h -> inf, h = o(x). Its inverse sets
// the uniformity thresholds x >= h_inv(n (mu + 1)) used by the large-deviation
// surfaces.
struct InsensitivityFn {
    double gamma;
    double operator()(double x) const;
    double inverse(double y) const;
};

// A univariate tail law on [0, inf): tail/quantile/mean/sampler plus the
// truncated tail integral V_u and the insensitivity function.
class ScalarLaw {
  public:
    static ScalarLaw pareto(double alpha, double xm);
    static ScalarLaw weibull(double shape, double scale);  // shape < 1: heavy
    static ScalarLaw lognormal(double mu, double sigma);
    static ScalarLaw exponential(double rate);
    static ScalarLaw geometric(double p);  // support {1,2,...}, P[k] = (1-p)^{k-1} p
    static ScalarLaw degenerate(double value);

    Family family() const { return family_; }
    double param(int i) const { return i == 0 ? a_ : b_; }
    std::string describe() const;

    // P[Z > x]; equals 1 below the support, right-continuous, non-increasing.
    double tail(double x) const;

    // Inverse of the tail on (0,1]: smallest x with tail(x) <= p for the
    // discrete families, the exact inverse for continuous ones.
    double quantile_of_tail(double p) const;

    // Density where one exists (continuous families); throws otherwise.
    double density(double x) const;
    bool has_density() const;

    double mean() const;  // throws InfMeanError when infinite
    bool has_finite_mean() const;

    // True for the families with long tails by construction (Pareto,
    // Weibull with shape < 1, Lognormal).
    bool is_long_tailed() const;

    double sample(RngStream& rng) const;  // inverse-transform draw
    double sample(Noise& noise) const;    // same draw from injected noise
    double sample_u(double u) const;      // the inverse transform itself, u in (0,1)

    // V_u(x) = min(1, int_x^{x+u} tail(y) dy), u >= 1. Closed form for
    // Pareto/Exponential/Degenerate/Geometric, adaptive quadrature otherwise.
    double truncated_tail_integral(double x, double u) const;

    // Insensitivity function of the law; throws for laws not tagged
    // long-tailed. Exponent may be overridden.
    InsensitivityFn insensitivity() const;
    double default_insensitivity_exponent() const;

  private:
    ScalarLaw(Family f, double a, double b) : family_(f), a_(a), b_(b) {}
    Family family_;
    double a_, b_;
};

// Standard-normal helpers shared by the lognormal law and the diagnostics.
double normal_tail(double z);
double inverse_normal_cdf(double p);

}  // namespace raretail
