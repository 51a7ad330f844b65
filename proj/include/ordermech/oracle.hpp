#pragma once

#include "ordermech/dual.hpp"
#include "ordermech/mechanism.hpp"
#include "ordermech/simplex.hpp"

#include <vector>

namespace ordermech {

// Finite-type discretization of an instance. Cell i is (edge[i-1], edge[i]]
// with its mass placed at the right edge v_i = edge[i]; all density
// breakpoints appear among the edges.
struct GridInstance {
    std::vector<Rat> v;                  // v_1 < ... < v_n = H (cell right edges)
    std::vector<std::vector<Rat>> mass;  // mass[g][i] >= 0, sums to q_g
    ItemPoset poset;
    Rat H;

    size_t n() const { return v.size(); }
    size_t items() const { return mass.size(); }
    // Discrete virtual value: v_i - (v_{i+1} - v_i) * tail(i) / mass(i).
    Rat phi_hat(ItemId g, size_t i) const;
    Rat tail_mass(ItemId g, size_t i) const;  // strictly above index i
    Rat max_cell_width() const;
};

GridInstance discretize(const Instance& inst, size_t target_cells);

struct LPSolution {
    Rat objective;
    std::vector<std::vector<Rat>> alloc;     // alloc[g][i] in [0,1], nondecreasing
    std::vector<std::vector<Rat>> payment;   // via the discrete payment identity
    std::vector<Rat> box_dual;               // per item
    std::vector<std::vector<Rat>> dom_dual;  // per edge, per grid index
    std::vector<std::vector<Rat>> mono_dual; // per item, per grid index (lambda-hat)
    Rat discretization_bound;
    int pivots = 0;
    int cut_rounds = 0;
};

// Exact optimum of the discrete program: maximize virtual welfare subject to
// monotone allocations in [0,1] and cumulative-utility dominance along every
// poset edge at every grid point. Dominance rows are generated lazily; the
// returned solution satisfies every row exactly.
LPSolution solve_grid_lp(const GridInstance& g);

// The full-support mechanism corresponding to a grid solution.
Mechanism mechanism_from_grid(const GridInstance& g, const LPSolution& s);

struct DeterministicBest {
    std::vector<Rat> prices;
    Rat revenue;
    bool pruned = false;  // price set thinned for size limits
};

// Exhaustive poset-consistent posted prices over grid values.
DeterministicBest best_deterministic(const GridInstance& g, size_t enumeration_limit = 5000000);

// Weak-duality bound: the discrete Lagrangian value of a (lambda, alpha)
// dual after mapping it onto the grid. Always >= solve_grid_lp objective.
Rat grid_dual_objective(const GridInstance& g, const DualSolution& d);

// Brute-force optimum by vertex enumeration of the increment polytope
// (small grids only: items * n <= 12 or so).
Rat enumerate_vertices_optimum(const GridInstance& g);

}  // namespace ordermech
