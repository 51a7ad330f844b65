#pragma once

#include "ordermech/rational.hpp"

#include <vector>

namespace ordermech {

// Dense exact-rational simplex for
//     max c·x   s.t.  A x (<= | = | >=) b,  x >= 0.
// Dantzig pricing with a Bland fallback after a degenerate streak, so the
// method terminates on every input. Sizes here are desk scale; no sparsity.

enum class RowSense { LE, EQ, GE };

struct LinearProgram {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    std::vector<RowSense> sense;
    std::vector<Rat> c;

    size_t rows() const { return A.size(); }
    size_t cols() const { return c.size(); }
    void add_row(std::vector<Rat> row, RowSense s, Rat rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rat objective;
    std::vector<Rat> x;
    // One multiplier per row, signed so that for an optimal pair
    //   c_j <= sum_i y_i A_ij  for all j,   y_i >= 0 on <=-rows,
    //   y_i <= 0 on >=-rows, free on =-rows.
    std::vector<Rat> y;
    int pivots = 0;
};

LpResult solve_lp_exact(const LinearProgram& lp);

}  // namespace ordermech
