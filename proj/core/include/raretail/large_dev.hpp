#pragma once

#include "raretail/counting.hpp"
#include "raretail/rare_set.hpp"
#include "raretail/stopped_sums.hpp"
#include "raretail/vector_law.hpp"

namespace raretail {

// Random sum over a horizon: S_{N(t)}. One path step per arrival index:
// the inter-arrival draw comes first, then (if the clock stays within t)
// the claim vector from the same step stream. Degenerate inter-arrivals
// consume no randomness, so the vector draws line up with fixed_sum_path
// draw for draw -- the Th. 5.2 -> Th. 5.1 reduction is bit-exact.
PathFactory random_sum_path(const VectorLaw& law, const CountingProcess& cp,
                            const RareSet& set, double t);

Estimate random_sum_tail(const VectorLaw& law, const CountingProcess& cp, const RareSet& set,
                         double t, double x, const EngineConfig& cfg);

// One cell of a precise-large-deviation surface.
struct SurfaceCell {
    double n_or_lambda = 0.0;
    double x_mult = 0.0;
    double threshold = 0.0;
    double x = 0.0;
    Estimate sum_tail;
    Estimate single_tail;
    double target = 0.0;
    double ratio = 0.0;
    double ratio_se = 0.0;
    bool reachable = true;
};

struct Surface {
    std::vector<SurfaceCell> cells;
    std::vector<double> x_mults;
    std::vector<double> max_dev_by_mult;  // worst |ratio-1| over reachable cells per mult
    double max_dev = 0.0;
    double mu_fa = 0.0;
    double gamma = 0.0;
};

// P[S_n in xA] / (n P[X in xA]) on the lattice n x x_mult, evaluated at
// x = x_mult * h_inv[n (mu_{F_A} + 1)]; never below the threshold.
Surface pld_fixed_n_surface(const VectorLaw& law, const RareSet& set,
                            const std::vector<int>& n_list, const std::vector<double>& x_mults,
                            const EngineConfig& cfg);

// P[S_{N(t)} in xA] / (floor(lambda(t)) P[X in xA]) on the lattice t x x_mult.
Surface pld_random_surface(const VectorLaw& law, const CountingProcess& cp, const RareSet& set,
                           const std::vector<double>& t_list, const std::vector<double>& x_mults,
                           const EngineConfig& cfg);

// n mu(A) V(x) (or floor(lambda(t)) mu(A) V(x)) for MRV summands, alpha > 1.
double pld_mrv_closed_form(const VectorLaw& law, const RareSet& set, double n_or_lambda,
                           double x);

}  // namespace raretail
