#include <doctest.h>

#include <cmath>

#include "raretail/quadrature.hpp"
#include "raretail/scalar_law.hpp"

using namespace raretail;

TEST_CASE("closed-form tails") {
    CHECK(ScalarLaw::pareto(2, 1).tail(2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ScalarLaw::pareto(2, 1).tail(0.5) == 1.0);  // below support
    CHECK(ScalarLaw::exponential(1).tail(1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(ScalarLaw::degenerate(3).tail(2.9) == 1.0);
    CHECK(ScalarLaw::degenerate(3).tail(3.0) == 0.0);
    CHECK(ScalarLaw::geometric(0.5).tail(0.5) == 1.0);
    CHECK(ScalarLaw::geometric(0.5).tail(3.0) == doctest::Approx(0.125));
}

TEST_CASE("tail/quantile round trip on a 1000-point support grid") {
    const ScalarLaw laws[] = {ScalarLaw::pareto(2.5, 1.0), ScalarLaw::weibull(0.5, 2.0),
                              ScalarLaw::lognormal(0.3, 1.2), ScalarLaw::exponential(0.7)};
    for (const ScalarLaw& law : laws) {
        for (int k = 1; k <= 1000; ++k) {
            const double p = std::pow(10.0, -9.0 * k / 1000.0);  // down to 1e-9
            const double x = law.quantile_of_tail(p);
            const double back = law.quantile_of_tail(law.tail(x));
            CHECK(std::abs(back - x) <= 1e-9 * std::max(1.0, std::abs(x)));
        }
    }
}

TEST_CASE("mean matches the integrated tail") {
    const ScalarLaw laws[] = {ScalarLaw::pareto(2.5, 1.0), ScalarLaw::weibull(0.5, 1.0),
                              ScalarLaw::lognormal(0.0, 1.0), ScalarLaw::exponential(2.0),
                              ScalarLaw::pareto(2.0, 0.03)};
    for (const ScalarLaw& law : laws) {
        const double mu = law.mean();
        const double quad = integrate_to_inf([&](double y) { return law.tail(y); }, 0.0).value;
        CHECK(std::abs(quad - mu) <= 1e-6 * mu);
    }
    // geometric: integrated tail is the geometric series sum
    const ScalarLaw g = ScalarLaw::geometric(0.25);
    double s = 0.0;
    for (int k = 0; k < 200; ++k) s += g.tail(k + 0.5);  // piecewise-constant cells
    CHECK(s == doctest::Approx(g.mean()).epsilon(1e-12));
}

TEST_CASE("infinite means are refused") {
    CHECK(!ScalarLaw::pareto(1.0, 1.0).has_finite_mean());
    CHECK_THROWS_AS(ScalarLaw::pareto(0.8, 1.0).mean(), InfMeanError);
}

TEST_CASE("samplers follow the tails") {
    RngStream rng(20240801, 1);
    const ScalarLaw deg = ScalarLaw::degenerate(3.0);
    for (int i = 0; i < 10; ++i) CHECK(deg.sample(rng) == 3.0);

    const ScalarLaw par = ScalarLaw::pareto(2, 1);
    const long n = 1'000'000;
    long hits = 0;
    for (long i = 0; i < n; ++i)
        if (par.sample(rng) > 2.0) ++hits;
    const double p = static_cast<double>(hits) / n;
    const double se = std::sqrt(0.25 * 0.75 / n);
    CHECK(std::abs(p - 0.25) < 3.0 * se);

    const ScalarLaw geo = ScalarLaw::geometric(0.5);
    double sum = 0.0;
    for (long i = 0; i < n; ++i) sum += geo.sample(rng);
    const double se_mean = std::sqrt(2.0 / n);  // var = (1-p)/p^2 = 2
    CHECK(std::abs(sum / n - 2.0) < 3.0 * se_mean);
}

TEST_CASE("geometric sampler puts the right mass on 1") {
    RngStream rng(5, 9);
    const ScalarLaw geo = ScalarLaw::geometric(0.5);
    long ones = 0;
    const long n = 200000;
    for (long i = 0; i < n; ++i)
        if (geo.sample(rng) == 1.0) ++ones;
    CHECK(std::abs(ones / static_cast<double>(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("truncated tail integral") {
    const ScalarLaw par = ScalarLaw::pareto(2, 1);
    CHECK(par.truncated_tail_integral(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(par.truncated_tail_integral(10.0, 1.0) ==
          doctest::Approx(1.0 / 10.0 - 1.0 / 11.0).epsilon(1e-12));
    // clamp branch: integral over [0, 3] exceeds 1
    CHECK(par.truncated_tail_integral(0.0, 3.0) == 1.0);
    // quadrature families agree with direct integration
    const ScalarLaw wb = ScalarLaw::weibull(0.5, 1.0);
    const double direct = integrate([&](double y) { return wb.tail(y); }, 2.0, 5.0, 1e-12, 1e-10).value;
    CHECK(wb.truncated_tail_integral(2.0, 3.0) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("truncated tail integral is monotone and clamped") {
    const ScalarLaw laws[] = {ScalarLaw::pareto(2, 1), ScalarLaw::weibull(0.5, 1.0),
                              ScalarLaw::lognormal(0.0, 1.0)};
    for (const ScalarLaw& law : laws) {
        double prev = 2.0;
        for (double x : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double v = law.truncated_tail_integral(x, 2.0);
            CHECK(v <= 1.0);
            CHECK(v <= prev + 1e-12);  // non-increasing in x
            CHECK(law.truncated_tail_integral(x, 4.0) >= v - 1e-12);  // non-decreasing in u
            prev = v;
        }
    }
}

TEST_CASE("insensitivity function and its inverse") {
    const InsensitivityFn h{0.5};
    CHECK(h(100.0) == doctest::Approx(10.0));
    CHECK(h.inverse(10.0) == doctest::Approx(100.0));
    // threshold arithmetic: gamma = 0.9, n (mu+1) = 30
    const InsensitivityFn h9{0.9};
    CHECK(h9.inverse(30.0) == doctest::Approx(43.776984088832556).epsilon(1e-12));
    CHECK(h9(h9.inverse(30.0)) == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("insensitivity ratio trends toward 1 along powers of ten") {
    // direct-evaluation oracle; the x = 1e6 value for Pareto(2,1), gamma 0.9
    // is still far from 1 -- only the trend is asymptotic
    const ScalarLaw par = ScalarLaw::pareto(2, 1);
    const InsensitivityFn h = par.insensitivity();
    CHECK(h.gamma == doctest::Approx(0.9));
    const double r6 = par.tail(1e6 - h(1e6)) / par.tail(1e6);
    CHECK(r6 == doctest::Approx(std::pow(1.0 - std::pow(1e6, -0.1), -2.0)).epsilon(1e-12));
    CHECK(r6 == doctest::Approx(1.7836).epsilon(1e-3));
    double prev = 1e300;
    for (int k = 2; k <= 8; ++k) {
        const double x = std::pow(10.0, k);
        const double r = par.tail(x - h(x)) / par.tail(x);
        CHECK(r >= 1.0);
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
}

TEST_CASE("weibull insensitivity exponent stays below the 1-shape boundary") {
    const ScalarLaw wb = ScalarLaw::weibull(0.5, 1.0);
    const InsensitivityFn h = wb.insensitivity();
    CHECK(h.gamma == doctest::Approx(0.475));
    CHECK(h.gamma < 1.0 - 0.5);
    double prev = 1e300;
    for (int k = 2; k <= 5; ++k) {  // tail underflows past 1e5
        const double x = std::pow(10.0, k);
        const double r = wb.tail(x - h(x)) / wb.tail(x);
        CHECK(r >= 1.0);
        CHECK(r <= prev * (1.0 + 1e-12));
        prev = r;
    }
}

TEST_CASE("laws without long tails have no insensitivity function") {
    CHECK_THROWS_AS(ScalarLaw::exponential(1.0).insensitivity(), std::invalid_argument);
    CHECK_THROWS_AS(ScalarLaw::degenerate(1.0).insensitivity(), std::invalid_argument);
    CHECK(ScalarLaw::weibull(1.5, 1.0).is_long_tailed() == false);
}

TEST_CASE("normal helpers round-trip") {
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
        const double z = inverse_normal_cdf(p);
        CHECK(1.0 - normal_tail(z) == doctest::Approx(p).epsilon(1e-11));
    }
}
