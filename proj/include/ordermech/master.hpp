#pragma once

#include "ordermech/dual.hpp"

#include <vector>

namespace ordermech {

// Prescription for one item's dual profile: zero-region endpoints in
// [1, H), and the ironed intervals inside them.
struct ItemCurveSpec {
    Rat r_lo, r_hi;
    std::vector<Interval> ironed;
};

// Full dual skeleton: per-item curve specs plus per-edge flow points.
// Flow masses are in joint scale; mass <= 0 requests an automatic choice
// within the sender's slope budget.
struct DualSpec {
    ItemPoset poset;
    Rat H;
    std::vector<Rat> q;                       // per item, sums to 1
    std::vector<ItemCurveSpec> items;
    std::vector<std::vector<FlowAtom>> flows;  // indexed like poset.edges()

    std::vector<std::string> validate() const;
};

// Unit-scale target revenue curve realizing the prescribed sign pattern:
// rises from (0,0) through (1,1) at bounded slope, stays flat on the zero
// region, dips into a V on every ironed interval, falls beyond r_hi.
PiecewiseFn curve_from_spec(const ItemCurveSpec& spec, const Rat& H);

// Distribution whose revenue curve reproduces `unit_curve` on [1, H-w]
// up to the global normalization 1/(1 + density floor); the end-of-horizon
// point mass is smoothed over the final half-piece and values below 1
// carry the floor density.
MarginalDist dist_from_curve(const PiecewiseFn& unit_curve, const Rat& H, Rat q = Rat(1));

struct Generated {
    Instance instance;
    DualSolution dual;
    VirtualProfile profile;  // recomputed from scratch after generation
};

// Build (distribution, feasible dual) with the prescribed zero regions,
// ironed intervals and flow supports; throws std::invalid_argument when the
// spec violates the preconditions, std::logic_error if the roundtrip check
// fails (which would be a bug, not an input problem).
Generated generate(const DualSpec& spec);

struct ChainInstance {
    Instance instance;
    DualSolution dual;
    TopChain chain;  // ground truth
    DualSpec spec;
};

// The three-item lower-bound factory: a top chain of length exactly M with
// abutting ironed intervals and flow into both top items at every chain
// point; C stays unironed.
ChainInstance generate_chain_instance(int M, const Rat& H);

// Largest M the default geometry supports for this horizon.
int max_chain_length(const Rat& H);

}  // namespace ordermech
