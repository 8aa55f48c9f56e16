#pragma once

#include <string>
#include <vector>

namespace raretail {

enum class RuinSetKind { SumNegative, AnyNegative };  // L1 and L2 ruin sets

// A member of the rare-set family encoded by a finite direction set:
// A = { x : p^T x > 1 for some p in the direction set }. Membership at scale
// s checks p^T x > s; the scalar projection is sup_p p^T x. Immutable after
// construction and safe to share across threads.
class RareSet {
  public:
    RareSet(std::vector<std::vector<double>> directions, std::string label);

    // A = { x : sum_i l_i x_i > c }; single direction l / c.
    static RareSet halfspace(const std::vector<double>& weights, double c);

    // A = { x : x_i > b_i for some i }; directions e_i / b_i.
    static RareSet orthant_exceedance(const std::vector<double>& thresholds);

    // Translate l - L of a ruin set: SumNegative gives { x : sum x_i > 1 }
    // (the A1 form with weights 1/d and c = 1/d), AnyNegative gives the
    // orthant set with thresholds l.
    static RareSet ruin_translate(const std::vector<double>& allocation, RuinSetKind kind);

    int dim() const { return dim_; }
    const std::string& label() const { return label_; }
    const std::vector<std::vector<double>>& directions() const { return directions_; }

    // sup_p p^T x over the direction set; 0 at the origin.
    double y_projection(const std::vector<double>& x) const;
    double y_projection(const double* x, int n) const;

    // strict membership: exists p with p^T x > scale
    bool contains(const std::vector<double>& x, double scale) const;

    // Smallest t with t*dir strictly inside A, i.e. 1 / y_projection(dir);
    // infinity when the ray never enters.
    double entry_scale(const std::vector<double>& direction) const;

    // The set scaled by lambda > 0 (directions divided by lambda).
    RareSet scaled(double lambda) const;

  private:
    std::vector<std::vector<double>> directions_;
    int dim_;
    std::string label_;
};

}  // namespace raretail
