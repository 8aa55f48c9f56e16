#pragma once

#include <vector>

#include "raretail/engine.hpp"
#include "raretail/rare_set.hpp"
#include "raretail/scalar_law.hpp"

namespace raretail {

enum class VectorKind { Independent, Lwqd, Mrv };

// d-dimensional non-negative claim-vector models. Independent marginals,
// LWQD coupling through a common additive shock, and multivariate regular
// variation with an atomic angular measure on the axes plus an optional
// diagonal direction.
class VectorLaw {
  public:
    static VectorLaw independent(std::vector<ScalarLaw> marginals);

    // X_i = Z_i + shock_weight * S with Z_i iid `common` and S one draw of a
    // strictly lighter law of the same family, shared across components.
    static VectorLaw lwqd(int dim, const ScalarLaw& common, double shock_weight);

    // X = R * D with R ~ radial (regularly varying) and D picked from axes
    // e_j (weight axis_weights[j]) or the unit diagonal (weight diag_weight).
    static VectorLaw mrv(int dim, double alpha, const ScalarLaw& radial,
                         std::vector<double> axis_weights, double diag_weight = 0.0);

    int dim() const { return dim_; }
    VectorKind kind() const { return kind_; }
    const std::vector<ScalarLaw>& marginals() const { return marginals_; }
    const ScalarLaw& common() const { return marginals_.front(); }
    const ScalarLaw& shock_law() const { return *shock_; }
    double shock_weight() const { return shock_weight_; }
    const ScalarLaw& radial() const { return *radial_; }
    double alpha() const { return alpha_; }
    const std::vector<double>& axis_weights() const { return axis_weights_; }
    double diag_weight() const { return diag_weight_; }

    void sample(Noise& noise, double* out) const;
    void sample(RngStream& rng, double* out) const;
    std::vector<double> sample(RngStream& rng) const;

    double component_mean(int i) const;  // throws InfMeanError
    bool has_finite_component_means() const;

    // Insensitivity exponent attached to F_A projections of this law: the
    // most conservative of the marginal/radial defaults.
    double insensitivity_exponent() const;

  private:
    VectorLaw() = default;
    VectorKind kind_ = VectorKind::Independent;
    int dim_ = 0;
    std::vector<ScalarLaw> marginals_;  // Independent: all; Lwqd: {common}
    std::optional<ScalarLaw> shock_;
    double shock_weight_ = 0.0;
    std::optional<ScalarLaw> radial_;
    double alpha_ = 0.0;
    std::vector<double> axis_weights_;
    double diag_weight_ = 0.0;
};

// Same family, strictly lighter tail; used for the LWQD shock.
ScalarLaw lighter_law(const ScalarLaw& law);

// Path over one vector draw, stepped at component granularity so the
// splitting engine can branch mid-vector. Statistic: y_projection of the
// partially filled vector (missing components read 0).
PathFactory single_vector_path(const VectorLaw& law, const RareSet& set);

struct MeanEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n = 0;
    Method method = Method::Analytic;
};

// P[X in xA] = P[y_projection(X) > x]. Analytic for Mrv (any set) and for
// independent marginals with an axis-aligned direction set; otherwise the
// rare-event engine, splitting before crude.
Estimate fa_tail(const VectorLaw& law, const RareSet& set, double x, const EngineConfig& cfg);

// mu_{F_A} = E[Y_A]; analytic for single-direction sets and Mrv, sample mean
// otherwise. Throws InfMeanError when a needed marginal mean is infinite.
MeanEstimate fa_mean(const VectorLaw& law, const RareSet& set, long budget,
                     const EngineConfig& cfg);

// Limit-measure value mu(A) of an Mrv law: sum of angular weights times
// entry-scale^{-alpha} over the atomic directions.
double mu_A(const VectorLaw& law, const RareSet& set);

}  // namespace raretail
