#pragma once

#include "ordermech/piecewise.hpp"
#include "ordermech/poset.hpp"

#include <optional>
#include <vector>

namespace ordermech {

// Global density floor: virtual values divide by f, so densities are kept
// strictly positive.
inline const Rat kDensityFloor = Rat(1, 1000000000);

// Conditional value distribution of one interest. The density is
// piecewise-constant on [0,H] and integrates to one; q is the probability
// that the buyer's interest is this item. `curve_samples` is the number of
// sub-samples per density piece used when the (quadratic) revenue curve is
// flattened to the piecewise-linear carrier; instances built from target
// curves set it to 1 because their density grid already is the curve grid.
struct MarginalDist {
    Rat q;
    PiecewiseFn density;
    int curve_samples = 16;

    std::vector<std::string> validate() const;
};

struct IronedCurve {
    PiecewiseFn base;
    PiecewiseFn hull;
    std::vector<Interval> ironed_intervals;
};

// Unnormalized CDF F(v) = q * ∫_0^v density: F(0)=0, F(H)=q.
PiecewiseFn cdf(const MarginalDist& m);

// Piecewise-linear revenue curve R(v) = v (q - F(v)); exact at its grid
// points, linear in between. The error bound against the exact quadratic
// is reported through revenue_curve_error.
PiecewiseFn revenue_curve(const MarginalDist& m);
Rat revenue_curve_error(const MarginalDist& m);

// Joint-scale virtual value density gamma = f*phi = -R'(v), a staircase.
PiecewiseFn gamma_fphi(const MarginalDist& m);
// Myerson virtual value phi = gamma / f_joint.
PiecewiseFn virtual_value(const MarginalDist& m);

// Monopoly reserve: largest maximizer of the revenue curve.
Rat monopoly_reserve(const MarginalDist& m);

bool is_dmr(const MarginalDist& m, const Rat& tol = Rat(0));

IronedCurve iron(const PiecewiseFn& revenue);

// Split lottery across an ironed interval: probability beta at price a_low,
// the rest at b_high (paper's two-option randomization).
struct SplitLottery {
    PiecewiseFn allocation;  // 0, beta on [a_low, b_high), 1 after
    PiecewiseFn payment;     // 0, beta*a_low, beta*a_low + (1-beta)*b_high
};

SplitLottery split_lottery(const Rat& lo_domain, const Rat& hi_domain,
                           const Rat& a_low, const Rat& b_high, const Rat& beta);

// Expected revenue of a split lottery against one marginal.
Rat split_lottery_revenue(const MarginalDist& m, const Rat& a_low, const Rat& b_high,
                          const Rat& beta);

// A full problem instance: poset, horizon, one marginal per item.
class Instance {
public:
    Instance() = default;
    Instance(ItemPoset poset, Rat H, std::vector<MarginalDist> marginals);

    const ItemPoset& poset() const { return poset_; }
    const Rat& H() const { return H_; }
    size_t items() const { return marginals_.size(); }
    const MarginalDist& marginal(ItemId g) const { return marginals_.at(g); }
    const std::vector<MarginalDist>& marginals() const { return marginals_; }

    // Cached canonical objects (computed once at construction).
    const PiecewiseFn& curve(ItemId g) const { return curves_.at(g); }
    const PiecewiseFn& gamma(ItemId g) const { return gammas_.at(g); }
    const PiecewiseFn& F(ItemId g) const { return cdfs_.at(g); }
    Rat reserve(ItemId g) const;

    // Distributional semantics of the instance: the mass of values >= v is
    // R(v)/v for the canonical piecewise-linear curve. This agrees with the
    // density CDF on the curve grid and is monotone everywhere, making
    // revenue, duals and the oracle share one exact model.
    Rat mass_above(ItemId g, const Rat& v) const;
    Rat cdf_at(ItemId g, const Rat& v) const { return marginals_.at(g).q - mass_above(g, v); }

    std::vector<std::string> validate() const;
    bool all_dmr(const Rat& tol = Rat(0)) const;

private:
    ItemPoset poset_;
    Rat H_;
    std::vector<MarginalDist> marginals_;
    std::vector<PiecewiseFn> curves_, gammas_, cdfs_;
};

}  // namespace ordermech
