#pragma once

#include "ordermech/dist.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ordermech {

struct FlowAtom {
    Rat at;    // position in (0, H]
    Rat mass;  // > 0
};

// Flow on one poset edge: point masses plus an optional piecewise-constant
// density. The tail integral A(v) = ∫_v^H α counts an atom at v as included
// (flow into (v,G) affects the profile at v and below).
struct FlowVar {
    std::vector<FlowAtom> atoms;
    std::optional<PiecewiseFn> density;

    Rat tail_at(const Rat& v, const Rat& H) const;  // closed tail [v, H]
    // Right-continuous step/pl representation of the tail on [0,H]; its
    // value at an atom position takes the open-tail branch, so pointwise
    // checks at atoms use tail_at.
    PiecewiseFn tail_fn(const Rat& H) const;
    Rat total_mass(const Rat& H) const;
    bool empty() const { return atoms.empty() && !density.has_value(); }
    void add_atom(const Rat& at, const Rat& mass);
};

// Lagrangian dual: per-item lambda (ironing) and per-edge flow. Edges are
// keyed by their index into poset.edges().
struct DualSolution {
    std::vector<PiecewiseFn> lambda;  // continuous, >= 0, lambda(0)=lambda(H)=0
    std::map<size_t, FlowVar> flow;

    const FlowVar* flow_on(size_t edge_index) const;
    FlowVar& flow_ref(size_t edge_index);

    static DualSolution zero(const Instance& inst);
    std::vector<std::string> validate(const Instance& inst) const;
};

// Per-item virtual value profile f_G(v) Φ_G(v) together with the zero-region
// endpoints and the ironed intervals read off the lambda support.
struct VirtualProfile {
    std::vector<PiecewiseFn> fphi;
    std::vector<Rat> r_lo, r_hi;
    std::vector<std::vector<Interval>> ironed;

    // Ironied interval containing v in item g, if any.
    std::optional<Interval> interval_containing(ItemId g, const Rat& v) const;
};

VirtualProfile virtual_profile(const Instance& inst, const DualSolution& d);

// f Φ with the given flows and lambda ≡ 0 (the pre-ironing profile).
PiecewiseFn fphi_unironed(const Instance& inst, const DualSolution& d, ItemId g);

// Replace lambda so every profile is monotone nondecreasing
// (Γ(v) = -∫_0^v fΦ, hull, λ = hull - Γ).
DualSolution properly_iron(const Instance& inst, const DualSolution& d);

bool properly_monotone(const Instance& inst, const DualSolution& d, const Rat& tol = Rat(0));

// Σ_G ∫ max(0, f_G Φ_G).
Rat dual_objective(const Instance& inst, const DualSolution& d);

// ---- three-item chain machinery -------------------------------------------

struct TopChainPoint {
    Rat x;
    ItemId item;
    Interval interval;  // ironed interval of `item` containing x
};

struct TopChain {
    std::vector<TopChainPoint> points;  // decreasing in x, alternating items
    bool empty() const { return points.empty(); }
    size_t length() const { return points.size(); }
};

// The minimal partially-ordered shape: one worst item with exactly two
// incomparable dominating items. Returns (C, A, B) ids.
struct MinimalShape {
    ItemId bottom;
    ItemId top1, top2;
    size_t edge_to_top1, edge_to_top2;  // indices into poset.edges()
};
std::optional<MinimalShape> minimal_shape(const ItemPoset& poset);

// Maximal top chain (Def. of chains over the two incomparable items).
TopChain find_top_chain(const Instance& inst, const DualSolution& d);

struct DoubleSwap {
    size_t chain_index;  // points[i]=(x,A), points[i+1]=(y,B)
    Rat x, y, z;
    ItemId item_x, item_y;
};

struct UpperSwap {
    Rat x, y;  // flow into (x,A) and (y,B) with x > r̄_A > y > r̄_B
    ItemId item_x, item_y;
};

struct SwapFindings {
    std::vector<DoubleSwap> double_swaps;
    std::vector<UpperSwap> upper_swaps;
    bool none() const { return double_swaps.empty() && upper_swaps.empty(); }
};

SwapFindings detect_swaps(const Instance& inst, const DualSolution& d);

// Flow rebalancing of Lemma E.2; eps <= 0 picks half the admissible maximum.
// Throws std::domain_error when eps exceeds the admissible maximum (the
// message carries the bound).
DualSolution remove_double_swap(const Instance& inst, const DualSolution& d,
                                const DoubleSwap& finding, Rat eps = Rat(0));

DualSolution remove_upper_swap(const Instance& inst, const DualSolution& d,
                               const UpperSwap& finding);

// Run properly_iron, then remove double and upper swaps to a fixpoint.
DualSolution best_dual_fixpoint(const Instance& inst, const DualSolution& d,
                                int max_rounds = 0);

}  // namespace ordermech
