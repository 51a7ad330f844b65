#pragma once

#include "ordermech/rational.hpp"

#include <utility>
#include <vector>

namespace ordermech {

struct Interval {
    Rat lo, hi;
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

// Piecewise-linear scalar function on [lo, hi]: breakpoints b0 < ... < bn,
// piece i is slope[i]*v + icept[i] on [b_i, b_{i+1}). Evaluation is
// right-continuous at interior breakpoints; the right endpoint uses the last
// piece. This one type carries densities (zero slopes), CDFs, revenue
// curves, lambda duals and allocations alike.
class PiecewiseFn {
public:
    PiecewiseFn() = default;
    PiecewiseFn(std::vector<Rat> breaks, std::vector<Rat> slopes, std::vector<Rat> icepts);

    // Continuous function through the given (breakpoint, value) pairs.
    static PiecewiseFn from_points(const std::vector<Rat>& breaks,
                                   const std::vector<Rat>& values);
    // Right-continuous step function: values[i] on [breaks[i], breaks[i+1]).
    static PiecewiseFn step(const std::vector<Rat>& breaks,
                            const std::vector<Rat>& values);
    static PiecewiseFn constant(const Rat& lo, const Rat& hi, const Rat& value);

    const std::vector<Rat>& breaks() const { return bks_; }
    const std::vector<Rat>& slopes() const { return slope_; }
    const std::vector<Rat>& icepts() const { return icept_; }
    size_t pieces() const { return slope_.size(); }
    Rat lo() const { return bks_.front(); }
    Rat hi() const { return bks_.back(); }

    Rat operator()(const Rat& v) const;   // right-continuous
    Rat value_left(const Rat& v) const;   // left limit (v > lo)
    Rat piece_value(size_t i, const Rat& v) const { return slope_[i] * v + icept_[i]; }

    bool is_step() const;
    bool continuous() const;

    // Same function, with the union of breakpoints.
    PiecewiseFn refined(const std::vector<Rat>& extra) const;
    // Merge adjacent pieces with identical coefficients.
    PiecewiseFn canonical() const;

    PiecewiseFn operator+(const PiecewiseFn& o) const;
    PiecewiseFn operator-(const PiecewiseFn& o) const;
    PiecewiseFn scaled(const Rat& c) const;
    PiecewiseFn shifted(const Rat& c) const;  // f + c
    PiecewiseFn negated() const { return scaled(Rat(-1)); }

    // Exact integral of the function over [a, b] within the domain.
    Rat integral(const Rat& a, const Rat& b) const;
    Rat integral() const { return integral(lo(), hi()); }
    // Exact integral of max(0, f); pieces are split at their zero crossings.
    Rat integral_pos(const Rat& a, const Rat& b) const;
    Rat integral_pos() const { return integral_pos(lo(), hi()); }

    // Antiderivative: F(v) = ∫_lo^v f. For step inputs this is exact and
    // piecewise-linear; general inputs are rejected (the square of the
    // carrier is quadratic and not representable).
    PiecewiseFn antiderivative() const;

    // Staircase of piece slopes (the derivative where it exists).
    PiecewiseFn derivative_steps() const;

    Rat min_value() const;
    Rat max_value() const;
    // Largest maximizer / minimizer over the vertex set (exact for
    // continuous piecewise-linear functions).
    Rat argmax_last() const;
    Rat argmin_last() const;

    // Vertices (b_i, f(b_i)) with right-continuous values.
    std::vector<std::pair<Rat, Rat>> vertices() const;

private:
    std::vector<Rat> bks_;
    std::vector<Rat> slope_, icept_;

    size_t piece_index(const Rat& v) const;
    friend std::vector<Rat> merge_breaks(const PiecewiseFn&, const PiecewiseFn&);
};

std::vector<Rat> merge_breaks(const PiecewiseFn& a, const PiecewiseFn& b);

// Least concave upper bound of a continuous piecewise-linear function,
// computed as the upper hull of its vertices (exact).
PiecewiseFn upper_concave_envelope(const PiecewiseFn& f);
// Greatest convex lower bound (same engine, negated).
PiecewiseFn lower_convex_envelope(const PiecewiseFn& f);

// Maximal intervals where hull differs from base (exact comparison).
std::vector<Interval> intervals_where_above(const PiecewiseFn& hull, const PiecewiseFn& base);

// Step-function utilities for allocation rules.
struct StepJump {
    Rat at;
    Rat value;  // value from `at` (inclusive) onward
};

PiecewiseFn step_from_jumps(const Rat& lo, const Rat& hi, const std::vector<StepJump>& jumps);
std::vector<StepJump> jumps_of_step(const PiecewiseFn& f);

}  // namespace ordermech
