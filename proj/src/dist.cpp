#include "ordermech/dist.hpp"

#include <algorithm>
#include <stdexcept>

namespace ordermech {

std::vector<std::string> MarginalDist::validate() const {
    std::vector<std::string> defects;
    if (q <= 0 || q > 1) defects.push_back("q outside (0,1]");
    if (!density.is_step()) defects.push_back("density is not piecewise-constant");
    if (density.lo() != 0) defects.push_back("density domain must start at 0");
    for (const Rat& v : density.icepts())
        if (v < kDensityFloor) {
            defects.push_back("density below the positivity floor");
            break;
        }
    Rat mass = density.integral();
    Rat err = mass - 1;
    if (err < 0) err = -err;
    if (err > Rat(1, 1000000000000LL)) defects.push_back("density does not integrate to 1");
    if (curve_samples < 1) defects.push_back("curve_samples must be >= 1");
    return defects;
}

PiecewiseFn cdf(const MarginalDist& m) {
    return m.density.antiderivative().scaled(m.q);
}

static std::vector<Rat> curve_grid(const MarginalDist& m) {
    const auto& b = m.density.breaks();
    std::vector<Rat> grid;
    for (size_t i = 0; i + 1 < b.size(); ++i) {
        grid.push_back(b[i]);
        for (int k = 1; k < m.curve_samples; ++k)
            grid.push_back(b[i] + (b[i + 1] - b[i]) * Rat(k, m.curve_samples));
    }
    grid.push_back(b.back());
    return grid;
}

PiecewiseFn revenue_curve(const MarginalDist& m) {
    PiecewiseFn F = cdf(m);
    std::vector<Rat> grid = curve_grid(m);
    std::vector<Rat> vals;
    vals.reserve(grid.size());
    for (const Rat& v : grid) vals.push_back(v * (m.q - F(v)));
    return PiecewiseFn::from_points(grid, vals);
}

Rat revenue_curve_error(const MarginalDist& m) {
    // On a sub-piece of width h with joint density c the exact curve is a
    // parabola with |R''| = 2c; the chord deviates by at most c h^2 / 4.
    const auto& b = m.density.breaks();
    const auto& d = m.density.icepts();
    Rat worst(0);
    for (size_t i = 0; i + 1 < b.size(); ++i) {
        Rat h = (b[i + 1] - b[i]) / m.curve_samples;
        worst = std::max(worst, m.q * d[i] * h * h / 4);
    }
    return worst;
}

PiecewiseFn gamma_fphi(const MarginalDist& m) {
    return revenue_curve(m).derivative_steps().scaled(Rat(-1));
}

PiecewiseFn virtual_value(const MarginalDist& m) {
    PiecewiseFn g = gamma_fphi(m);
    PiecewiseFn f = m.density.scaled(m.q).refined(g.breaks());
    g = g.refined(f.breaks());
    std::vector<Rat> vals;
    const auto& b = g.breaks();
    for (size_t i = 0; i + 1 < b.size(); ++i) {
        Rat fv = f(b[i]);
        if (fv < kDensityFloor) throw std::domain_error("virtual value: density below floor");
        vals.push_back(g(b[i]) / fv);
    }
    return PiecewiseFn::step(b, vals);
}

Rat monopoly_reserve(const MarginalDist& m) { return revenue_curve(m).argmax_last(); }

bool is_dmr(const MarginalDist& m, const Rat& tol) {
    // Concavity of the revenue curve: piece slopes nonincreasing.
    PiecewiseFn R = revenue_curve(m);
    const auto& s = R.slopes();
    for (size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i + 1] - s[i] > tol) return false;
    return true;
}

IronedCurve iron(const PiecewiseFn& revenue) {
    IronedCurve out;
    out.base = revenue;
    out.hull = upper_concave_envelope(revenue);
    out.ironed_intervals = intervals_where_above(out.hull, out.base);
    return out;
}

SplitLottery split_lottery(const Rat& lo, const Rat& hi, const Rat& a_low,
                           const Rat& b_high, const Rat& beta) {
    if (!(lo <= a_low && a_low < b_high && b_high <= hi))
        throw std::invalid_argument("split_lottery: need lo <= a_low < b_high <= hi");
    if (!(beta > 0 && beta < 1)) {
        if (beta == 1) {  // degenerate: a posted price at a_low
            SplitLottery s;
            s.allocation = step_from_jumps(lo, hi, {{a_low, Rat(1)}});
            s.payment = step_from_jumps(lo, hi, {{a_low, a_low}});
            return s;
        }
        throw std::invalid_argument("split_lottery: beta outside (0,1]");
    }
    SplitLottery s;
    s.allocation = step_from_jumps(lo, hi, {{a_low, beta}, {b_high, Rat(1)}});
    Rat p1 = beta * a_low;
    s.payment = step_from_jumps(lo, hi, {{a_low, p1}, {b_high, p1 + (1 - beta) * b_high}});
    return s;
}

Rat split_lottery_revenue(const MarginalDist& m, const Rat& a_low, const Rat& b_high,
                          const Rat& beta) {
    PiecewiseFn R = revenue_curve(m);
    Rat H = R.hi();
    SplitLottery s = split_lottery(Rat(0), H, a_low, b_high, beta);
    // step payments against the canonical mass-above R(v)/v
    auto above = [&](const Rat& v) { return v <= 0 ? m.q : R(v) / v; };
    Rat total(0);
    const auto& b = s.payment.breaks();
    const auto& p = s.payment.icepts();
    for (size_t i = 0; i + 1 < b.size(); ++i) total += p[i] * (above(b[i]) - above(b[i + 1]));
    return total;
}

Instance::Instance(ItemPoset poset, Rat H, std::vector<MarginalDist> marginals)
    : poset_(std::move(poset)), H_(std::move(H)), marginals_(std::move(marginals)) {
    if (poset_.size() != marginals_.size())
        throw std::invalid_argument("instance: one marginal per item required");
    curves_.reserve(items());
    gammas_.reserve(items());
    cdfs_.reserve(items());
    for (const auto& m : marginals_) {
        curves_.push_back(revenue_curve(m));
        gammas_.push_back(curves_.back().derivative_steps().scaled(Rat(-1)));
        cdfs_.push_back(cdf(m));
    }
}

Rat Instance::reserve(ItemId g) const { return curves_.at(g).argmax_last(); }

Rat Instance::mass_above(ItemId g, const Rat& v) const {
    if (v <= 0) return marginals_.at(g).q;
    if (v >= H_) {
        Rat rH = curves_.at(g)(H_);
        return rH / H_;  // any terminal point mass the curve carries
    }
    return curves_.at(g)(v) / v;
}

std::vector<std::string> Instance::validate() const {
    std::vector<std::string> defects = poset_.validate();
    if (H_ <= 0) defects.push_back("H must be positive");
    Rat qsum(0);
    for (size_t g = 0; g < marginals_.size(); ++g) {
        for (auto& d : marginals_[g].validate())
            defects.push_back(poset_.label(static_cast<ItemId>(g)) + ": " + d);
        if (marginals_[g].density.hi() != H_)
            defects.push_back(poset_.label(static_cast<ItemId>(g)) + ": density domain != [0,H]");
        qsum += marginals_[g].q;
    }
    Rat err = qsum - 1;
    if (err < 0) err = -err;
    if (err > Rat(1, 1000000000000LL)) defects.push_back("interest masses do not sum to 1");
    return defects;
}

bool Instance::all_dmr(const Rat& tol) const {
    for (const auto& m : marginals_)
        if (!is_dmr(m, tol)) return false;
    return true;
}

}  // namespace ordermech
