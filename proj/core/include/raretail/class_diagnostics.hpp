#pragma once

#include <optional>

#include "raretail/scalar_law.hpp"
#include "raretail/trend.hpp"

namespace raretail {

// Deterministic quadrature diagnostics for the univariate tail classes.
// Limits are replaced by trend verdicts on a geometric grid x = x0 * 2^k,
// truncated where tail(x) drops below the underflow floor.
struct DiagnosticOptions {
    double x0 = 8.0;
    int points = 18;  // k = 0 .. points-1
    int last_k = 3;
    double tol_shift = 0.02;   // long-tail / regular-variation classes
    double tol_conv = 0.05;    // convolution-based classes
    double spread_tol = 0.10;  // dominated-variation boundedness
    double underflow_floor = 1e-300;
};

std::vector<double> diagnostic_grid(const ScalarLaw& law, const DiagnosticOptions& opts);

// tail(x-a)/tail(x) -> 1 (long tail)
TrendReport long_tail_ratio(const ScalarLaw& law, double a,
                            const DiagnosticOptions& opts = {});

// tail(b x)/tail(x) bounded for b in (0,1) (dominated variation)
TrendReport dominated_variation_ratio(const ScalarLaw& law, double b,
                                      const DiagnosticOptions& opts = {});

// tail(t x)/tail(x) -> t^-alpha (regular variation); target defaults from the
// Pareto exponent and must be supplied for other families.
TrendReport rv_ratio(const ScalarLaw& law, double t,
                     std::optional<double> target = std::nullopt,
                     const DiagnosticOptions& opts = {});

// two-fold convolution tail over the tail -> 2 (subexponential)
TrendReport subexp_ratio(const ScalarLaw& law, const DiagnosticOptions& opts = {});

// int_0^x tail(x-y) tail(y) dy / (2 mean tail(x)) -> 1 (strong subexponential)
TrendReport strong_subexp_ratio(const ScalarLaw& law, const DiagnosticOptions& opts = {});

// Per-u subexponentiality of the truncated-tail laws V_u, with the largest u
// standing proxy for u -> infinity. The uniform summary is the worst
// last-grid-point deviation across the sampled u's; this under-approximates
// the paper-level uniform statement and reports say so.
struct StronglySubexpReport {
    std::vector<double> u_grid;
    std::vector<TrendReport> per_u;
    double uniform_max_dev = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

StronglySubexpReport strongly_subexp_ratio(const ScalarLaw& law,
                                           std::vector<double> u_grid = {},
                                           const DiagnosticOptions& opts = {});

// Building blocks, exposed for tests and cross-checks.
double twofold_convolution_tail(const ScalarLaw& law, double x);
double strong_subexp_integral(const ScalarLaw& law, double x);

// Tail, 0-atom and clamp boundary of the truncated-tail law V_u.
struct TruncatedTailLaw {
    const ScalarLaw* parent;
    double u;
    double clamp_end;  // V_u tail == 1 on [0, clamp_end]
    double atom0;      // mass at zero when the integral never reaches 1
    double tail(double x) const;
    double density(double x) const;  // 0 on the clamped region
};
TruncatedTailLaw make_truncated_law(const ScalarLaw& law, double u);
double twofold_truncated_tail(const TruncatedTailLaw& vu, double x);

}  // namespace raretail
