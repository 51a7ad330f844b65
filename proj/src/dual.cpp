#include "ordermech/dual.hpp"

#include <algorithm>
#include <stdexcept>

namespace ordermech {

Rat FlowVar::tail_at(const Rat& v, const Rat& H) const {
    Rat t(0);
    for (const auto& a : atoms)
        if (a.at >= v) t += a.mass;
    if (density) t += density->integral(std::min(v, density->hi()), density->hi());
    (void)H;
    return t;
}

PiecewiseFn FlowVar::tail_fn(const Rat& H) const {
    // Start from the density tail (continuous, nonincreasing), then add the
    // atom staircase; drops happen just above each atom position.
    PiecewiseFn base = PiecewiseFn::constant(Rat(0), H, Rat(0));
    if (density) {
        const PiecewiseFn& f = *density;
        if (f.lo() != 0 || f.hi() != H)
            throw std::invalid_argument("flow density domain must be [0,H]");
        std::vector<Rat> vals;
        auto b = f.breaks();
        for (auto& x : b) vals.push_back(f.integral(x, f.hi()));
        base = PiecewiseFn::from_points(b, vals);
    }
    if (!atoms.empty()) {
        std::vector<Rat> pos;
        for (const auto& a : atoms)
            if (a.at > 0 && a.at < H) pos.push_back(a.at);
        base = base.refined(pos);
        std::vector<Rat> icept = base.icepts();
        const auto& bks = base.breaks();
        for (size_t i = 0; i + 1 < bks.size(); ++i) {
            Rat add(0);
            for (const auto& a : atoms)
                if (a.at > bks[i]) add += a.mass;  // atom included for v <= at
            icept[i] += add;
        }
        base = PiecewiseFn(bks, base.slopes(), icept);
    }
    return base;
}

Rat FlowVar::total_mass(const Rat& H) const { return tail_at(Rat(0), H); }

void FlowVar::add_atom(const Rat& at, const Rat& mass) {
    for (auto& a : atoms)
        if (a.at == at) {
            a.mass += mass;
            if (a.mass < 0) throw std::domain_error("flow atom mass below zero");
            if (a.mass == 0)
                atoms.erase(std::remove_if(atoms.begin(), atoms.end(),
                                           [&](const FlowAtom& x) { return x.at == at; }),
                            atoms.end());
            return;
        }
    if (mass < 0) throw std::domain_error("flow atom mass below zero");
    if (mass > 0) atoms.push_back({at, mass});
}

const FlowVar* DualSolution::flow_on(size_t edge_index) const {
    auto it = flow.find(edge_index);
    return it == flow.end() ? nullptr : &it->second;
}

FlowVar& DualSolution::flow_ref(size_t edge_index) { return flow[edge_index]; }

DualSolution DualSolution::zero(const Instance& inst) {
    DualSolution d;
    for (size_t g = 0; g < inst.items(); ++g)
        d.lambda.push_back(PiecewiseFn::constant(Rat(0), inst.H(), Rat(0)));
    return d;
}

std::vector<std::string> DualSolution::validate(const Instance& inst) const {
    std::vector<std::string> defects;
    if (lambda.size() != inst.items()) {
        defects.push_back("lambda count != item count");
        return defects;
    }
    for (size_t g = 0; g < lambda.size(); ++g) {
        const auto& l = lambda[g];
        const std::string& name = inst.poset().label(static_cast<ItemId>(g));
        if (!l.continuous()) defects.push_back("lambda discontinuous on " + name);
        if (l(Rat(0)) != 0) defects.push_back("lambda(0) != 0 on " + name);
        if (l(l.hi()) != 0) defects.push_back("lambda(H) != 0 on " + name);
        for (auto& [x, y] : l.vertices())
            if (y < 0) {
                defects.push_back("lambda negative on " + name);
                break;
            }
    }
    for (auto& [e, fv] : flow) {
        if (e >= inst.poset().edges().size()) {
            defects.push_back("flow on unknown edge index");
            continue;
        }
        for (auto& a : fv.atoms) {
            if (a.mass <= 0) defects.push_back("flow atom with non-positive mass");
            if (a.at <= 0 || a.at > inst.H()) defects.push_back("flow atom outside (0,H]");
        }
        if (fv.density) {
            if (!fv.density->is_step()) defects.push_back("flow density not piecewise-constant");
            for (const Rat& v : fv.density->icepts())
                if (v < 0) {
                    defects.push_back("flow density negative");
                    break;
                }
        }
    }
    return defects;
}

PiecewiseFn fphi_unironed(const Instance& inst, const DualSolution& d, ItemId g) {
    PiecewiseFn acc = inst.gamma(g);
    const auto& edges = inst.poset().edges();
    for (size_t e = 0; e < edges.size(); ++e) {
        const FlowVar* fv = d.flow_on(e);
        if (!fv || fv->empty()) continue;
        if (edges[e].first == g) acc = acc + fv->tail_fn(inst.H());   // outgoing
        if (edges[e].second == g) acc = acc - fv->tail_fn(inst.H());  // incoming
    }
    return acc;
}

static std::vector<Interval> lambda_support(const PiecewiseFn& l) {
    PiecewiseFn zero = PiecewiseFn::constant(l.lo(), l.hi(), Rat(0));
    return intervals_where_above(l, zero);
}

// Smallest v with f(v) >= 0 under right-continuous evaluation.
static Rat first_nonnegative(const PiecewiseFn& f) {
    const auto& b = f.breaks();
    for (size_t i = 0; i < f.pieces(); ++i) {
        Rat l = f.piece_value(i, b[i]);
        Rat r = f.piece_value(i, b[i + 1]);
        if (l >= 0) return b[i];
        if (r > 0) return -f.icepts()[i] / f.slopes()[i];  // crossing inside
    }
    return f.hi();
}

static Rat last_nonpositive(const PiecewiseFn& f) {
    const auto& b = f.breaks();
    for (size_t i = f.pieces(); i-- > 0;) {
        Rat l = f.piece_value(i, b[i]);
        Rat r = f.piece_value(i, b[i + 1]);  // left limit at the right end
        if (r <= 0) return b[i + 1];
        if (l < 0) return -f.icepts()[i] / f.slopes()[i];
    }
    return f.lo();
}

VirtualProfile virtual_profile(const Instance& inst, const DualSolution& d) {
    auto defects = d.validate(inst);
    if (!defects.empty()) throw std::invalid_argument("invalid dual: " + defects.front());
    VirtualProfile vp;
    for (size_t g = 0; g < inst.items(); ++g) {
        PiecewiseFn f = fphi_unironed(inst, d, static_cast<ItemId>(g)) -
                        d.lambda[g].derivative_steps();
        vp.fphi.push_back(f);
        vp.r_lo.push_back(first_nonnegative(f));
        vp.r_hi.push_back(last_nonpositive(f));
        vp.ironed.push_back(lambda_support(d.lambda[g]));
    }
    return vp;
}

std::optional<Interval> VirtualProfile::interval_containing(ItemId g, const Rat& v) const {
    for (const auto& iv : ironed.at(g))
        if (iv.lo <= v && v <= iv.hi) return iv;
    return std::nullopt;
}

DualSolution properly_iron(const Instance& inst, const DualSolution& d) {
    DualSolution out = d;
    for (size_t g = 0; g < inst.items(); ++g) {
        PiecewiseFn f = fphi_unironed(inst, d, static_cast<ItemId>(g));
        PiecewiseFn gamma_int;
        if (f.is_step()) {
            gamma_int = f.antiderivative();  // exact
        } else {
            // flow densities make fΦ piecewise-linear; flatten its integral
            // onto the breakpoint grid (quantified approximation)
            std::vector<Rat> b = f.breaks(), vals;
            for (auto& x : b) vals.push_back(f.integral(f.lo(), x));
            gamma_int = PiecewiseFn::from_points(b, vals);
        }
        PiecewiseFn Gamma = gamma_int.negated();  // Γ(v) = -∫ fΦ
        PiecewiseFn hull = upper_concave_envelope(Gamma);
        out.lambda[g] = (hull - Gamma).canonical();
    }
    return out;
}

bool properly_monotone(const Instance& inst, const DualSolution& d, const Rat& tol) {
    VirtualProfile vp = virtual_profile(inst, d);
    for (const auto& f : vp.fphi) {
        auto vs = f.vertices();
        // staircase/pl: require nondecreasing across pieces and within pieces
        for (size_t i = 0; i + 1 < f.pieces(); ++i) {
            if (f.slopes()[i] < -tol) return false;
            Rat left_end = f.piece_value(i, f.breaks()[i + 1]);
            Rat right_start = f.piece_value(i + 1, f.breaks()[i + 1]);
            if (right_start - left_end < -tol) return false;
        }
        if (!f.pieces()) continue;
        if (f.slopes().back() < -tol) return false;
    }
    return true;
}

Rat dual_objective(const Instance& inst, const DualSolution& d) {
    VirtualProfile vp = virtual_profile(inst, d);
    Rat total(0);
    for (const auto& f : vp.fphi) total += f.integral_pos();
    return total;
}

std::optional<MinimalShape> minimal_shape(const ItemPoset& poset) {
    if (poset.size() != 3 || poset.edges().size() != 2) return std::nullopt;
    for (ItemId c = 0; c < 3; ++c) {
        auto succ = poset.successors(c);
        if (succ.size() == 2 && poset.predecessors(c).empty()) {
            MinimalShape s;
            s.bottom = c;
            auto it = succ.begin();
            s.top1 = *it++;
            s.top2 = *it;
            const auto& edges = poset.edges();
            for (size_t e = 0; e < edges.size(); ++e) {
                if (edges[e] == std::make_pair(c, s.top1)) s.edge_to_top1 = e;
                if (edges[e] == std::make_pair(c, s.top2)) s.edge_to_top2 = e;
            }
            return s;
        }
    }
    return std::nullopt;
}

// Candidate chain points: flow atoms into a top item where the profile
// vanishes (one-sided), the item is strictly ironed, and the point sits
// strictly inside its ironed interval.
struct ChainCandidate {
    Rat x;
    ItemId item;
    Interval interval;
};

static std::vector<ChainCandidate> chain_candidates(const DualSolution& d,
                                                    const VirtualProfile& vp,
                                                    const MinimalShape& shape) {
    std::vector<ChainCandidate> cands;
    auto scan = [&](size_t edge_index, ItemId top) {
        const FlowVar* fv = d.flow_on(edge_index);
        if (!fv) return;
        for (const auto& a : fv->atoms) {
            if (a.mass <= 0) continue;
            const PiecewiseFn& f = vp.fphi[top];
            if (a.at <= f.lo() || a.at > f.hi()) continue;
            bool zero = (a.at < f.hi() && f(a.at) == 0) || f.value_left(a.at) == 0;
            if (!zero) continue;
            if (d.lambda[top](a.at) <= 0) continue;
            auto iv = vp.interval_containing(top, a.at);
            if (!iv) continue;
            if (!(iv->lo < a.at && a.at < iv->hi)) continue;
            cands.push_back({a.at, top, *iv});
        }
    };
    scan(shape.edge_to_top1, shape.top1);
    scan(shape.edge_to_top2, shape.top2);
    std::sort(cands.begin(), cands.end(),
              [](const ChainCandidate& a, const ChainCandidate& b) { return a.x > b.x; });
    return cands;
}

TopChain find_top_chain(const Instance& inst, const DualSolution& d) {
    auto shape = minimal_shape(inst.poset());
    if (!shape) throw std::invalid_argument("top chains require the minimal 3-item shape");
    VirtualProfile vp = virtual_profile(inst, d);
    auto cands = chain_candidates(d, vp, *shape);

    TopChain chain;
    for (const auto& c : cands) {
        ItemId other = (c.item == shape->top1) ? shape->top2 : shape->top1;
        if (chain.empty()) {
            if (c.x > vp.r_hi[other]) {
                chain.points.push_back({c.x, c.item, c.interval});
            }
            continue;
        }
        const TopChainPoint& prev = chain.points.back();
        if (c.item == prev.item) continue;                   // must alternate
        if (!(prev.interval.lo < c.x && c.x < prev.x)) continue;
        chain.points.push_back({c.x, c.item, c.interval});
    }
    return chain;
}

SwapFindings detect_swaps(const Instance& inst, const DualSolution& d) {
    auto shape = minimal_shape(inst.poset());
    if (!shape) throw std::invalid_argument("swap detection requires the minimal 3-item shape");
    SwapFindings out;
    VirtualProfile vp = virtual_profile(inst, d);
    TopChain chain = find_top_chain(inst, d);

    auto edge_of = [&](ItemId top) {
        return top == shape->top1 ? shape->edge_to_top1 : shape->edge_to_top2;
    };

    // double swaps: flow into the upper point's item inside [x̲, y)
    for (size_t i = 0; i + 1 < chain.points.size(); ++i) {
        const auto& up = chain.points[i];
        const auto& dn = chain.points[i + 1];
        const FlowVar* fv = d.flow_on(edge_of(up.item));
        if (!fv) continue;
        for (const auto& a : fv->atoms) {
            if (a.mass <= 0) continue;
            if (up.interval.lo <= a.at && a.at < dn.x)
                out.double_swaps.push_back({i, up.x, dn.x, a.at, up.item, dn.item});
        }
    }

    // upper swaps: flow into (x,A) and (y,B) with x > r̄_A > y > r̄_B
    for (ItemId A : {shape->top1, shape->top2}) {
        ItemId B = (A == shape->top1) ? shape->top2 : shape->top1;
        const FlowVar* fa = d.flow_on(edge_of(A));
        const FlowVar* fb = d.flow_on(edge_of(B));
        if (!fa || !fb) continue;
        for (const auto& ax : fa->atoms) {
            if (ax.mass <= 0 || !(ax.at > vp.r_hi[A])) continue;
            for (const auto& by : fb->atoms) {
                if (by.mass <= 0) continue;
                if (vp.r_hi[A] > by.at && by.at > vp.r_hi[B])
                    out.upper_swaps.push_back({ax.at, by.at, A, B});
            }
        }
    }
    return out;
}

static Rat atom_mass_at(const FlowVar& fv, const Rat& at) {
    for (const auto& a : fv.atoms)
        if (a.at == at) return a.mass;
    return Rat(0);
}

DualSolution remove_double_swap(const Instance& inst, const DualSolution& d,
                                const DoubleSwap& f, Rat eps) {
    auto shape = minimal_shape(inst.poset());
    if (!shape) throw std::invalid_argument("minimal 3-item shape required");
    const Rat &x = f.x, &y = f.y, &z = f.z;
    if (!(z < y && y < x)) throw std::invalid_argument("double swap: need z < y < x");
    ItemId A = f.item_x, B = f.item_y;
    size_t eA = (A == shape->top1) ? shape->edge_to_top1 : shape->edge_to_top2;
    size_t eB = (B == shape->top1) ? shape->edge_to_top1 : shape->edge_to_top2;

    Rat ratio = (x - y) / (y - z);  // α = ratio ε, γ = (1 + ratio) ε

    // cap 1: the ironed interval [x̲_A, x̄_A] must stay ironed. The flow move
    // lifts Γ_A by the tent dent(v) with peak ε(x-y) at y; admissible while
    // dent < λ_A strictly inside the interval.
    VirtualProfile vp = virtual_profile(inst, d);
    auto iv = vp.interval_containing(A, x);
    if (!iv) throw std::invalid_argument("double swap: x not ironed in its item");
    const PiecewiseFn& lamA = d.lambda[A];
    auto dent_unit = [&](const Rat& v) {
        if (v <= z || v >= x) return Rat(0);
        if (v <= y) return ratio * (v - z);
        return x - v;  // slope -1 from the peak ε(x-y) down to 0 at x
    };
    Rat eps_max(-1);
    std::vector<Rat> probes{z, y, x};
    for (const Rat& b : lamA.breaks())
        if (b > iv->lo && b < iv->hi) probes.push_back(b);
    for (const Rat& v : probes) {
        if (!(v > iv->lo && v < iv->hi)) continue;
        Rat du = dent_unit(v);
        if (du <= 0) continue;
        Rat bound = lamA(v) / du;
        if (eps_max < 0 || bound < eps_max) eps_max = bound;
    }
    // cap 2: available atom masses
    const FlowVar* fvA = d.flow_on(eA);
    const FlowVar* fvB = d.flow_on(eB);
    if (!fvA || !fvB) throw std::invalid_argument("double swap: flows missing");
    Rat capx = atom_mass_at(*fvA, x);
    Rat capy = atom_mass_at(*fvB, y) / (1 + ratio);
    Rat capz = atom_mass_at(*fvA, z) / ratio;
    Rat cap = std::min({capx, capy, capz});
    if (eps_max < 0 || cap < eps_max) eps_max = cap;

    if (eps_max <= 0) throw std::domain_error("double swap: no admissible eps");
    if (eps <= 0) eps = eps_max / 2;
    if (eps > eps_max)
        throw std::domain_error("double swap: eps exceeds admissible maximum " +
                                rat_to_string(eps_max));

    DualSolution out = d;
    Rat alpha = ratio * eps, gamma = (1 + ratio) * eps;
    out.flow_ref(eA).add_atom(x, -eps);
    out.flow_ref(eB).add_atom(x, eps);
    out.flow_ref(eB).add_atom(y, -gamma);
    out.flow_ref(eA).add_atom(y, gamma);
    out.flow_ref(eA).add_atom(z, -alpha);
    out.flow_ref(eB).add_atom(z, alpha);
    return properly_iron(inst, out);
}

DualSolution remove_upper_swap(const Instance& inst, const DualSolution& d,
                               const UpperSwap& f) {
    auto shape = minimal_shape(inst.poset());
    if (!shape) throw std::invalid_argument("minimal 3-item shape required");
    ItemId A = f.item_x, B = f.item_y;
    const Rat &x = f.x, &y = f.y;
    size_t eA = (A == shape->top1) ? shape->edge_to_top1 : shape->edge_to_top2;
    size_t eB = (B == shape->top1) ? shape->edge_to_top1 : shape->edge_to_top2;
    VirtualProfile vp = virtual_profile(inst, d);
    if (!(x > vp.r_hi[A] && vp.r_hi[A] > y && y > vp.r_hi[B]))
        throw std::invalid_argument("upper swap: ordering x > r̄_A > y > r̄_B violated");

    const FlowVar* fvA = d.flow_on(eA);
    const FlowVar* fvB = d.flow_on(eB);
    if (!fvA || !fvB) throw std::invalid_argument("upper swap: flows missing");

    // B loses α over [y,x]: stay within its positive part there.
    Rat capB_profile = std::min(vp.fphi[B](y), vp.fphi[B].value_left(x));
    for (const Rat& b : vp.fphi[B].breaks())
        if (b > y && b < x)
            capB_profile = std::min({capB_profile, vp.fphi[B](b), vp.fphi[B].value_left(b)});
    Rat cap = std::min({atom_mass_at(*fvA, x), atom_mass_at(*fvB, y), capB_profile});

    // proof case 1 target: lift A's profile to zero at the top of y's
    // ironed interval (or at y itself when unironed)
    Rat ybar = y;
    if (auto iv = vp.interval_containing(A, y)) ybar = iv->hi;
    Rat target(0);
    if (ybar < vp.r_hi[A]) {
        Rat v = vp.fphi[A](ybar);
        if (v < 0) target = -v;
    }
    Rat alpha = (target > 0) ? std::min(target, cap) : cap / 2;
    if (alpha <= 0) throw std::domain_error("upper swap: no admissible move");

    DualSolution out = d;
    out.flow_ref(eB).add_atom(y, -alpha);
    out.flow_ref(eB).add_atom(x, alpha);
    out.flow_ref(eA).add_atom(x, -alpha);
    out.flow_ref(eA).add_atom(y, alpha);
    return properly_iron(inst, out);
}

DualSolution best_dual_fixpoint(const Instance& inst, const DualSolution& d, int max_rounds) {
    DualSolution cur = properly_iron(inst, d);
    if (max_rounds <= 0) {
        size_t atoms = 0;
        for (auto& [e, fv] : cur.flow) atoms += fv.atoms.size();
        max_rounds = 10 * static_cast<int>(atoms) + 10;
    }
    for (int round = 0; round < max_rounds; ++round) {
        SwapFindings sf = detect_swaps(inst, cur);
        if (sf.none()) return cur;
        if (!sf.double_swaps.empty())
            cur = remove_double_swap(inst, cur, sf.double_swaps.front());
        else
            cur = remove_upper_swap(inst, cur, sf.upper_swaps.front());
    }
    return cur;
}

}  // namespace ordermech
