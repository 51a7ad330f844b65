#include "ordermech/piecewise.hpp"

#include <algorithm>
#include <stdexcept>

namespace ordermech {

PiecewiseFn::PiecewiseFn(std::vector<Rat> breaks, std::vector<Rat> slopes,
                         std::vector<Rat> icepts)
    : bks_(std::move(breaks)), slope_(std::move(slopes)), icept_(std::move(icepts)) {
    if (bks_.size() < 2 || slope_.size() != bks_.size() - 1 || icept_.size() != slope_.size())
        throw std::invalid_argument("piecewise: inconsistent sizes");
    for (size_t i = 0; i + 1 < bks_.size(); ++i)
        if (!(bks_[i] < bks_[i + 1]))
            throw std::invalid_argument("piecewise: breakpoints not strictly increasing");
}

PiecewiseFn PiecewiseFn::from_points(const std::vector<Rat>& breaks,
                                     const std::vector<Rat>& values) {
    if (breaks.size() != values.size() || breaks.size() < 2)
        throw std::invalid_argument("from_points: need matching lists, >= 2 points");
    std::vector<Rat> s(breaks.size() - 1), c(breaks.size() - 1);
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        s[i] = (values[i + 1] - values[i]) / (breaks[i + 1] - breaks[i]);
        c[i] = values[i] - s[i] * breaks[i];
    }
    return PiecewiseFn(breaks, std::move(s), std::move(c));
}

PiecewiseFn PiecewiseFn::step(const std::vector<Rat>& breaks,
                              const std::vector<Rat>& values) {
    if (breaks.size() != values.size() + 1)
        throw std::invalid_argument("step: need one value per interval");
    std::vector<Rat> s(values.size(), Rat(0));
    return PiecewiseFn(breaks, std::move(s), values);
}

PiecewiseFn PiecewiseFn::constant(const Rat& lo, const Rat& hi, const Rat& value) {
    return step({lo, hi}, {value});
}

size_t PiecewiseFn::piece_index(const Rat& v) const {
    if (v < lo() || v > hi()) throw std::out_of_range("piecewise: value outside domain");
    // upper_bound over interior breakpoints
    size_t idx = std::upper_bound(bks_.begin(), bks_.end(), v) - bks_.begin();
    if (idx == 0) return 0;
    if (idx >= bks_.size()) return pieces() - 1;
    return idx - 1;
}

Rat PiecewiseFn::operator()(const Rat& v) const {
    size_t i = piece_index(v);
    return piece_value(i, v);
}

Rat PiecewiseFn::value_left(const Rat& v) const {
    if (v <= lo()) throw std::out_of_range("value_left at/below domain start");
    size_t idx = std::lower_bound(bks_.begin(), bks_.end(), v) - bks_.begin();
    size_t i = (idx < bks_.size() && bks_[idx] == v) ? (idx == 0 ? 0 : idx - 1)
                                                     : piece_index(v);
    return piece_value(i, v);
}

bool PiecewiseFn::is_step() const {
    return std::all_of(slope_.begin(), slope_.end(), [](const Rat& s) { return s == 0; });
}

bool PiecewiseFn::continuous() const {
    for (size_t i = 0; i + 1 < pieces(); ++i)
        if (piece_value(i, bks_[i + 1]) != piece_value(i + 1, bks_[i + 1])) return false;
    return true;
}

PiecewiseFn PiecewiseFn::refined(const std::vector<Rat>& extra) const {
    std::vector<Rat> nb = bks_;
    for (const Rat& x : extra)
        if (x > lo() && x < hi()) nb.push_back(x);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    std::vector<Rat> s(nb.size() - 1), c(nb.size() - 1);
    for (size_t i = 0; i + 1 < nb.size(); ++i) {
        size_t j = piece_index(nb[i]);
        s[i] = slope_[j];
        c[i] = icept_[j];
    }
    return PiecewiseFn(std::move(nb), std::move(s), std::move(c));
}

PiecewiseFn PiecewiseFn::canonical() const {
    std::vector<Rat> nb{bks_[0]};
    std::vector<Rat> s, c;
    for (size_t i = 0; i < pieces(); ++i) {
        if (!s.empty() && s.back() == slope_[i] && c.back() == icept_[i]) continue;
        if (!s.empty()) nb.push_back(bks_[i]);
        s.push_back(slope_[i]);
        c.push_back(icept_[i]);
    }
    nb.push_back(bks_.back());
    return PiecewiseFn(std::move(nb), std::move(s), std::move(c));
}

std::vector<Rat> merge_breaks(const PiecewiseFn& a, const PiecewiseFn& b) {
    if (a.lo() != b.lo() || a.hi() != b.hi())
        throw std::invalid_argument("merge_breaks: domain mismatch");
    std::vector<Rat> nb;
    nb.reserve(a.bks_.size() + b.bks_.size());
    std::merge(a.bks_.begin(), a.bks_.end(), b.bks_.begin(), b.bks_.end(),
               std::back_inserter(nb));
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    return nb;
}

PiecewiseFn PiecewiseFn::operator+(const PiecewiseFn& o) const {
    std::vector<Rat> nb = merge_breaks(*this, o);
    std::vector<Rat> s(nb.size() - 1), c(nb.size() - 1);
    for (size_t i = 0; i + 1 < nb.size(); ++i) {
        size_t ja = piece_index(nb[i]);
        size_t jb = o.piece_index(nb[i]);
        s[i] = slope_[ja] + o.slope_[jb];
        c[i] = icept_[ja] + o.icept_[jb];
    }
    return PiecewiseFn(std::move(nb), std::move(s), std::move(c));
}

PiecewiseFn PiecewiseFn::operator-(const PiecewiseFn& o) const { return *this + o.scaled(Rat(-1)); }

PiecewiseFn PiecewiseFn::scaled(const Rat& k) const {
    std::vector<Rat> s(slope_), c(icept_);
    for (auto& x : s) x *= k;
    for (auto& x : c) x *= k;
    return PiecewiseFn(bks_, std::move(s), std::move(c));
}

PiecewiseFn PiecewiseFn::shifted(const Rat& k) const {
    std::vector<Rat> c(icept_);
    for (auto& x : c) x += k;
    return PiecewiseFn(bks_, slope_, std::move(c));
}

Rat PiecewiseFn::integral(const Rat& a, const Rat& b) const {
    if (a > b) return -integral(b, a);
    if (a < lo() || b > hi()) throw std::out_of_range("integral outside domain");
    Rat total(0);
    for (size_t i = 0; i < pieces(); ++i) {
        Rat l = std::max(a, bks_[i]);
        Rat r = std::min(b, bks_[i + 1]);
        if (l >= r) continue;
        // ∫ s v + c dv = s(r²-l²)/2 + c(r-l)
        total += slope_[i] * (r * r - l * l) / 2 + icept_[i] * (r - l);
    }
    return total;
}

Rat PiecewiseFn::integral_pos(const Rat& a, const Rat& b) const {
    if (a > b) throw std::invalid_argument("integral_pos: reversed bounds");
    Rat total(0);
    auto seg = [&](const Rat& s, const Rat& c, const Rat& l, const Rat& r) {
        return s * (r * r - l * l) / 2 + c * (r - l);
    };
    for (size_t i = 0; i < pieces(); ++i) {
        Rat l = std::max(a, bks_[i]);
        Rat r = std::min(b, bks_[i + 1]);
        if (l >= r) continue;
        const Rat& s = slope_[i];
        const Rat& c = icept_[i];
        Rat fl = s * l + c, fr = s * r + c;
        if (fl >= 0 && fr >= 0) {
            total += seg(s, c, l, r);
        } else if (fl <= 0 && fr <= 0) {
            // nothing
        } else {
            Rat z = -c / s;  // the sign change point
            if (fl < 0)
                total += seg(s, c, z, r);
            else
                total += seg(s, c, l, z);
        }
    }
    return total;
}

PiecewiseFn PiecewiseFn::antiderivative() const {
    if (!is_step())
        throw std::domain_error("antiderivative: only defined for step functions");
    std::vector<Rat> vals(bks_.size());
    vals[0] = Rat(0);
    for (size_t i = 0; i + 1 < bks_.size(); ++i)
        vals[i + 1] = vals[i] + icept_[i] * (bks_[i + 1] - bks_[i]);
    return from_points(bks_, vals);
}

PiecewiseFn PiecewiseFn::derivative_steps() const {
    return PiecewiseFn::step(bks_, slope_);
}

std::vector<std::pair<Rat, Rat>> PiecewiseFn::vertices() const {
    std::vector<std::pair<Rat, Rat>> v;
    v.reserve(bks_.size());
    for (size_t i = 0; i < pieces(); ++i) v.emplace_back(bks_[i], piece_value(i, bks_[i]));
    v.emplace_back(bks_.back(), piece_value(pieces() - 1, bks_.back()));
    return v;
}

Rat PiecewiseFn::min_value() const {
    auto vs = vertices();
    Rat m = vs.front().second;
    for (auto& [x, y] : vs) m = std::min(m, y);
    return m;
}

Rat PiecewiseFn::max_value() const {
    auto vs = vertices();
    Rat m = vs.front().second;
    for (auto& [x, y] : vs) m = std::max(m, y);
    return m;
}

Rat PiecewiseFn::argmax_last() const {
    auto vs = vertices();
    Rat best = vs.front().second, arg = vs.front().first;
    for (auto& [x, y] : vs)
        if (y >= best) { best = y; arg = x; }
    return arg;
}

Rat PiecewiseFn::argmin_last() const {
    auto vs = vertices();
    Rat best = vs.front().second, arg = vs.front().first;
    for (auto& [x, y] : vs)
        if (y <= best) { best = y; arg = x; }
    return arg;
}

PiecewiseFn upper_concave_envelope(const PiecewiseFn& f) {
    if (!f.continuous())
        throw std::domain_error("envelope: input must be continuous");
    auto vs = f.vertices();
    // Monotone-chain upper hull over the vertex list (already x-sorted).
    std::vector<std::pair<Rat, Rat>> hull;
    for (auto& p : vs) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // keep b only if it lies strictly above the chord a-p
            Rat above = (p.first - a.first) * (b.second - a.second) -
                        (b.first - a.first) * (p.second - a.second);
            if (above <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    std::vector<Rat> bx, by;
    for (auto& [x, y] : hull) { bx.push_back(x); by.push_back(y); }
    return PiecewiseFn::from_points(bx, by);
}

PiecewiseFn lower_convex_envelope(const PiecewiseFn& f) {
    return upper_concave_envelope(f.negated()).negated();
}

std::vector<Interval> intervals_where_above(const PiecewiseFn& hull, const PiecewiseFn& base) {
    PiecewiseFn diff = hull - base;
    std::vector<Interval> out;
    auto nb = diff.breaks();
    bool open = false;
    Rat start;
    // The strict set {hull > base} is a union of open intervals whose
    // boundaries lie on breakpoints of the difference; single-point contacts
    // split adjacent components.
    for (size_t i = 0; i + 1 < nb.size(); ++i) {
        Rat at_left = diff(nb[i]);
        if (open && at_left == 0) {
            open = false;
            out.push_back({start, nb[i]});
        }
        bool above = (at_left > 0) || (diff.value_left(nb[i + 1]) > 0);
        if (above && !open) {
            open = true;
            start = nb[i];
        }
    }
    if (open) out.push_back({start, nb.back()});
    return out;
}

PiecewiseFn step_from_jumps(const Rat& lo, const Rat& hi, const std::vector<StepJump>& jumps_in) {
    std::vector<StepJump> jumps = jumps_in;
    std::stable_sort(jumps.begin(), jumps.end(),
                     [](const StepJump& a, const StepJump& b) { return a.at < b.at; });
    std::vector<Rat> breaks{lo};
    std::vector<Rat> values{Rat(0)};
    for (const auto& j : jumps) {
        if (j.at < lo || j.at > hi) throw std::invalid_argument("jump outside domain");
        if (j.at == hi) continue;  // a jump exactly at hi never shows up right-continuously
        if (j.at == breaks.back()) { values.back() = j.value; continue; }
        breaks.push_back(j.at);
        values.push_back(j.value);
    }
    breaks.push_back(hi);
    return PiecewiseFn::step(breaks, values);
}

std::vector<StepJump> jumps_of_step(const PiecewiseFn& f) {
    if (!f.is_step()) throw std::domain_error("jumps_of_step: not a step function");
    std::vector<StepJump> out;
    const auto& b = f.breaks();
    const auto& v = f.icepts();
    for (size_t i = 0; i < v.size(); ++i) {
        if (i == 0 || v[i] != v[i - 1]) out.push_back({b[i], v[i]});
    }
    return out;
}

}  // namespace ordermech
