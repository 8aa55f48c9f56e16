#include <doctest.h>

#include <cmath>

#include "raretail/class_diagnostics.hpp"
#include "raretail/quadrature.hpp"

using namespace raretail;

TEST_CASE("long-tail ratios") {
    const ScalarLaw par = ScalarLaw::pareto(2, 1);
    TrendReport r = long_tail_ratio(par, 1.0);
    // direct evaluation at x = 1000: (999/1000)^{-2}
    CHECK(par.tail(999.0) / par.tail(1000.0) == doctest::Approx(1.0020030).epsilon(1e-6));
    CHECK(r.verdict == Verdict::Consistent);

    TrendReport e = long_tail_ratio(ScalarLaw::exponential(1.0), 1.0);
    CHECK(e.ratios.back() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));  // memoryless
    CHECK(e.verdict == Verdict::Inconsistent);

    TrendReport id = long_tail_ratio(par, 0.0);
    for (double v : id.ratios) CHECK(v == 1.0);
    CHECK(id.verdict == Verdict::Consistent);
}

TEST_CASE("dominated variation") {
    TrendReport p = dominated_variation_ratio(ScalarLaw::pareto(2, 1), 0.5);
    CHECK(p.ratios.back() == doctest::Approx(4.0).epsilon(1e-12));  // b^{-alpha}
    CHECK(p.verdict == Verdict::Consistent);
    CHECK(dominated_variation_ratio(ScalarLaw::weibull(0.5, 1.0), 0.5).verdict ==
          Verdict::Inconsistent);
    CHECK(dominated_variation_ratio(ScalarLaw::lognormal(0.0, 1.0), 0.5).verdict ==
          Verdict::Inconsistent);
}

TEST_CASE("regular variation") {
    TrendReport r = rv_ratio(ScalarLaw::pareto(2, 1), 2.0);
    CHECK(r.target == doctest::Approx(0.25));
    CHECK(r.max_dev_last_k < 1e-12);
    CHECK(r.verdict == Verdict::Consistent);
    TrendReport one = rv_ratio(ScalarLaw::pareto(2, 1), 1.0);
    CHECK(one.target == doctest::Approx(1.0));
    CHECK(one.verdict == Verdict::Consistent);
    // Weibull against any positive target dies to zero
    TrendReport w = rv_ratio(ScalarLaw::weibull(0.5, 1.0), 2.0, 0.25);
    CHECK(w.verdict == Verdict::Inconsistent);
    CHECK(w.ratios.back() < 1e-30);
    CHECK_THROWS_AS(rv_ratio(ScalarLaw::weibull(0.5, 1.0), 2.0), std::invalid_argument);
}

TEST_CASE("two-fold convolution tail has the exponential closed form") {
    // Exp(1): P[Z1+Z2 > x] = (1+x) e^{-x}, so the ratio to the tail is 1+x
    const ScalarLaw e = ScalarLaw::exponential(1.0);
    CHECK(twofold_convolution_tail(e, 8.0) / e.tail(8.0) ==
          doctest::Approx(9.0).epsilon(1e-8));
    TrendReport r = subexp_ratio(e);
    CHECK(r.verdict == Verdict::Inconsistent);
}

TEST_CASE("subexponential ratio for Pareto trends to 2") {
    TrendReport r = subexp_ratio(ScalarLaw::pareto(2, 1));
    // x = 1024 sits on the default grid (8 * 2^7)
    bool found = false;
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        if (r.grid[i] == 1024.0) {
            found = true;
            CHECK(std::abs(r.ratios[i] - 2.0) / 2.0 < 0.03);
        }
    }
    CHECK(found);
    CHECK(r.verdict == Verdict::Consistent);
    CHECK_THROWS_AS(subexp_ratio(ScalarLaw::degenerate(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(subexp_ratio(ScalarLaw::geometric(0.5)), std::invalid_argument);
}

TEST_CASE("strong subexponential ratio") {
    const ScalarLaw p25 = ScalarLaw::pareto(2.5, 1.0);
    TrendReport r = strong_subexp_ratio(p25);
    CHECK(r.verdict == Verdict::Consistent);
    bool found = false;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        if (r.grid[i] == 1024.0) {
            found = true;
            CHECK(std::abs(r.ratios[i] - 1.0) < 0.05);
        }
    CHECK(found);

    // split-at-x/2 equals a full-range quadrature oracle
    const double x = 100.0;
    auto f = [&](double y) { return p25.tail(x - y) * p25.tail(y); };
    const double full = integrate_segmented(f, geometric_breakpoints(0.0, x, 0.5), 0.0, 1e-12).value;
    CHECK(strong_subexp_integral(p25, x) == doctest::Approx(full).epsilon(1e-8));

    // Exp(1): integral = x e^{-x}, ratio = x / 2
    const ScalarLaw e = ScalarLaw::exponential(1.0);
    CHECK(strong_subexp_integral(e, 8.0) / (2.0 * e.mean() * e.tail(8.0)) ==
          doctest::Approx(4.0).epsilon(1e-9));
    CHECK(strong_subexp_ratio(e).verdict == Verdict::Inconsistent);

    CHECK_THROWS_AS(strong_subexp_ratio(ScalarLaw::pareto(1.0, 1.0)), InfMeanError);
}

TEST_CASE("truncated-tail law V_u") {
    const ScalarLaw par = ScalarLaw::pareto(2, 1);
    const TruncatedTailLaw vu = make_truncated_law(par, 1.0);
    // closed form for alpha = 2: V_u tail at x >= 1 is 1/x - 1/(x+1)
    CHECK(vu.tail(50.0) == doctest::Approx(1.0 / 50.0 - 1.0 / 51.0).epsilon(1e-12));
    // u = 2 clamps until x* = (sqrt(5)-1)/2
    const TruncatedTailLaw vu2 = make_truncated_law(par, 2.0);
    CHECK(vu2.clamp_end == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-9));
    CHECK(vu2.tail(0.5) == 1.0);
    CHECK(vu2.atom0 == 0.0);
    CHECK(vu2.density(0.3) == 0.0);
    // huge u approximates the integrated tail
    const ScalarLaw p25 = ScalarLaw::pareto(2.5, 1.0);
    const TruncatedTailLaw vinf = make_truncated_law(p25, 1e6);
    const double it = std::pow(100.0, -1.5) / 1.5;  // int_x^inf y^{-2.5} dy
    CHECK(vinf.tail(100.0) == doctest::Approx(it).epsilon(1e-4));
}

TEST_CASE("strongly subexponential report") {
    const StronglySubexpReport rep = strongly_subexp_ratio(ScalarLaw::pareto(2.5, 1.0));
    CHECK(rep.u_grid.size() == 6);
    CHECK(rep.verdict == Verdict::Consistent);
    CHECK(rep.uniform_max_dev < 0.05);
    for (const TrendReport& r : rep.per_u) CHECK(r.verdict == Verdict::Consistent);
    CHECK_THROWS_AS(strongly_subexp_ratio(ScalarLaw::pareto(0.9, 1.0)), InfMeanError);
}

TEST_CASE("full chain for Pareto(2.5) and the Weibull/Exponential contrasts") {
    const ScalarLaw p = ScalarLaw::pareto(2.5, 1.0);
    CHECK(long_tail_ratio(p, 1.0).verdict == Verdict::Consistent);
    CHECK(dominated_variation_ratio(p, 0.5).verdict == Verdict::Consistent);
    CHECK(rv_ratio(p, 2.0).verdict == Verdict::Consistent);
    CHECK(subexp_ratio(p).verdict == Verdict::Consistent);
    CHECK(strong_subexp_ratio(p).verdict == Verdict::Consistent);
    const ScalarLaw w = ScalarLaw::weibull(0.5, 1.0);
    CHECK(strong_subexp_ratio(w).verdict == Verdict::Consistent);
    CHECK(dominated_variation_ratio(w, 0.5).verdict == Verdict::Inconsistent);
    CHECK(long_tail_ratio(ScalarLaw::exponential(1.0), 1.0).verdict == Verdict::Inconsistent);
}

TEST_CASE("underflow guard truncates the grid") {
    DiagnosticOptions opts;
    const std::vector<double> g = diagnostic_grid(ScalarLaw::weibull(0.5, 1.0), opts);
    CHECK(g.size() < 18);
    for (double x : g) CHECK(ScalarLaw::weibull(0.5, 1.0).tail(x) >= 1e-300);
    // ratios stay finite and positive on the evaluated grid
    TrendReport r = strong_subexp_ratio(ScalarLaw::weibull(0.5, 1.0), opts);
    for (double v : r.ratios) {
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
    }
}
