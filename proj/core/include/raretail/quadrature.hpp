#pragma once

#include <functional>
#include <vector>

namespace raretail {

struct QuadResult {
    double value = 0.0;
    double err = 0.0;
    long evals = 0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a,b]. An interval is accepted when its
// local error estimate drops below max(abs_tol scaled by length, rel_tol * |segment|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-9,
                     long max_intervals = 1'000'000);

// Same, but with the initial interval list pre-split at the given interior
// breakpoints. Tail convolutions have features pinned near both endpoints of
// huge ranges; seeding geometric breakpoints keeps the subdivision from
// missing them.
QuadResult integrate_segmented(const std::function<double(double)>& f,
                               const std::vector<double>& breakpoints,
                               double abs_tol = 1e-10, double rel_tol = 1e-9,
                               long max_intervals = 1'000'000);

// Breakpoints for [a,b] refined geometrically toward both endpoints down to
// resolution `scale` (clamped to the interval).
std::vector<double> geometric_breakpoints(double a, double b, double scale = 1.0);

// Integral over [a, inf) via the substitution x = a + t/(1-t).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double abs_tol = 1e-10, double rel_tol = 1e-9);

}  // namespace raretail
