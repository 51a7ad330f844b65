#include "ordermech/master.hpp"

#include <algorithm>
#include <stdexcept>

namespace ordermech {

namespace {

const Rat kFloor = kDensityFloor;  // conditional density floor
// the [0,1) floor mass is carved out of the curve part: G = δv on [0,1),
// then δ + (1-δ)F(v), so the induced revenue curve is (1-δ)-scaled exactly
const Rat kScale = Rat(1) - kFloor;

}  // namespace

std::vector<std::string> DualSpec::validate() const {
    std::vector<std::string> defects = poset.validate();
    if (H < 4) defects.push_back("H must be at least 4");
    if (q.size() != poset.size() || items.size() != poset.size())
        defects.push_back("per-item lists must match the poset");
    else {
        Rat qs(0);
        for (const Rat& x : q) {
            if (x <= 0) defects.push_back("interest mass must be positive");
            qs += x;
        }
        if (qs != 1) defects.push_back("interest masses must sum to 1");
        for (size_t g = 0; g < items.size(); ++g) {
            const auto& it = items[g];
            const std::string& name = poset.label(static_cast<ItemId>(g));
            if (!(1 <= it.r_lo && it.r_lo <= it.r_hi))
                defects.push_back(name + ": need 1 <= r_lo <= r_hi");
            if (!(it.r_hi <= H - Rat(1, 2)))
                defects.push_back(name + ": r_hi must stay below H - 1/2");
            Rat prev = it.r_lo;
            for (const auto& iv : it.ironed) {
                if (!(prev <= iv.lo && iv.lo < iv.hi && iv.hi <= it.r_hi))
                    defects.push_back(name + ": ironed intervals must be disjoint, "
                                             "ordered, inside [r_lo, r_hi]");
                prev = iv.hi;
            }
        }
    }
    if (flows.size() != poset.edges().size())
        defects.push_back("per-edge flow list must match the poset edges");
    else {
        for (size_t e = 0; e < flows.size(); ++e) {
            ItemId sender = poset.edges()[e].first;
            for (const auto& a : flows[e]) {
                if (!(a.at > 1 && a.at < H))
                    defects.push_back("flow point outside (1, H)");
                if (sender < static_cast<ItemId>(items.size()))
                    for (const auto& iv : items[sender].ironed)
                        if (iv.lo < a.at && a.at <= iv.hi)
                            defects.push_back("flow point inside a sender ironed interval");
            }
        }
    }
    return defects;
}

PiecewiseFn curve_from_spec(const ItemCurveSpec& spec, const Rat& H) {
    if (!(1 <= spec.r_lo && spec.r_lo <= spec.r_hi && spec.r_hi <= H - Rat(1, 2)))
        throw std::invalid_argument("curve spec: need 1 <= r_lo <= r_hi <= H - 1/2");
    Rat prev = spec.r_lo;
    for (const auto& iv : spec.ironed) {
        if (!(prev <= iv.lo && iv.lo < iv.hi && iv.hi <= spec.r_hi))
            throw std::invalid_argument("curve spec: bad ironed interval layout");
        prev = iv.hi;
    }

    // Slope 1/(2H) everywhere on [1,H]; level of the zero region:
    Rat slope = Rat(1) / (2 * H);
    Rat level = Rat(1) + (spec.r_lo - 1) * slope;

    std::vector<Rat> xs{Rat(0), Rat(1)};
    std::vector<Rat> ys{Rat(0), Rat(1)};
    auto push = [&](const Rat& x, const Rat& y) {
        if (x > xs.back()) {
            xs.push_back(x);
            ys.push_back(y);
        }
    };
    push(spec.r_lo, level);
    for (const auto& iv : spec.ironed) {
        push(iv.lo, level);
        Rat mid = (iv.lo + iv.hi) / 2;
        push(mid, level - (mid - iv.lo) * slope);
        push(iv.hi, level);
    }
    push(spec.r_hi, level);
    // descent: keep |slope| <= 1/(2H); land above zero at H
    push(H, level - (H - spec.r_hi) * slope);
    return PiecewiseFn::from_points(xs, ys);
}

MarginalDist dist_from_curve(const PiecewiseFn& unit_curve, const Rat& H, Rat q) {
    if (unit_curve.lo() != 0 || unit_curve.hi() != H)
        throw std::invalid_argument("dist_from_curve: curve domain must be [0,H]");
    if (unit_curve(Rat(1)) != 1)
        throw std::invalid_argument("dist_from_curve: need R(1) = 1");
    if (!unit_curve.continuous())
        throw std::invalid_argument("dist_from_curve: curve must be continuous");

    // F(x) = 1 - R(x)/x on [1,H]; validate monotonicity exactly.
    std::vector<Rat> bks;
    for (const Rat& b : unit_curve.breaks())
        if (b >= 1) bks.push_back(b);
    if (bks.front() != 1) bks.insert(bks.begin(), Rat(1));
    std::vector<Rat> F;
    for (const Rat& b : bks) {
        Rat val = 1 - unit_curve(b) / b;
        if (!F.empty() && val < F.back())
            throw std::invalid_argument("dist_from_curve: induced F not monotone");
        if (val < 0) throw std::invalid_argument("dist_from_curve: induced F negative");
        F.push_back(val);
    }

    // smear the end-of-horizon atom over the last half-piece
    Rat w = (bks[bks.size() - 1] - bks[bks.size() - 2]) / 2;
    Rat smear_from = H - w;
    Rat atom = 1 - F.back();

    std::vector<Rat> dbks{Rat(0), Rat(1)};
    std::vector<Rat> dens{kFloor};
    for (size_t i = 0; i + 1 < bks.size(); ++i) {
        Rat lo = bks[i], hi = bks[i + 1];
        Rat massx = F[i + 1] - F[i];
        if (hi <= smear_from) {
            dbks.push_back(hi);
            dens.push_back(kScale * massx / (hi - lo));
        } else {
            // split the final piece at smear_from using the exact F there
            Rat f_split = 1 - unit_curve(smear_from) / smear_from;
            Rat m1 = f_split - F[i], m2 = F[i + 1] - f_split;
            if (smear_from > lo) {
                dbks.push_back(smear_from);
                dens.push_back(kScale * m1 / (smear_from - lo));
            }
            dbks.push_back(hi);
            dens.push_back(kScale * (m2 + atom) / (hi - smear_from));
        }
    }

    MarginalDist m;
    m.q = q;
    m.density = PiecewiseFn::step(dbks, dens);
    m.curve_samples = 1;
    auto defects = m.validate();
    if (!defects.empty())
        throw std::invalid_argument("dist_from_curve: " + defects.front());
    return m;
}

Generated generate(const DualSpec& spec) {
    auto defects = spec.validate();
    if (!defects.empty()) throw std::invalid_argument("dual spec: " + defects.front());
    size_t m = spec.poset.size();
    const auto& edges = spec.poset.edges();

    // resolve automatic flow masses: each sender's total hinge slope stays
    // within 1/(8H) unit-scale, keeping its induced F comfortably monotone
    std::vector<std::vector<FlowAtom>> flows = spec.flows;
    std::vector<size_t> auto_count(m, 0);
    for (size_t e = 0; e < flows.size(); ++e)
        for (const auto& a : flows[e])
            if (a.mass <= 0) ++auto_count[edges[e].first];
    for (size_t e = 0; e < flows.size(); ++e) {
        ItemId sender = edges[e].first;
        if (!auto_count[sender]) continue;
        Rat unit_each = Rat(1) / (8 * spec.H * Rat(static_cast<long>(auto_count[sender])));
        for (auto& a : flows[e])
            if (a.mass <= 0) a.mass = spec.q[sender] * kScale * unit_each;
    }

    // per-item unit curves with flow hinges
    std::vector<PiecewiseFn> unit(m);
    for (size_t g = 0; g < m; ++g) unit[g] = curve_from_spec(spec.items[g], spec.H);
    for (size_t e = 0; e < edges.size(); ++e) {
        auto [snd, rcv] = edges[e];
        for (const auto& a : flows[e]) {
            // hinge (y - v)+ : slope -mu below y, 0 after
            auto hinge = [&](const Rat& mu) {
                return PiecewiseFn::from_points({Rat(0), a.at, spec.H},
                                                {mu * a.at, Rat(0), Rat(0)});
            };
            Rat mu_snd = a.mass / (spec.q[snd] * kScale);
            Rat mu_rcv = a.mass / (spec.q[rcv] * kScale);
            unit[snd] = unit[snd] - hinge(mu_snd);
            unit[rcv] = unit[rcv] + hinge(mu_rcv);
        }
    }

    std::vector<MarginalDist> marginals;
    for (size_t g = 0; g < m; ++g) {
        // hinges move R(1); renormalize the curve back to R(1) = 1 by a
        // vertical shift of the [1,H] part... shifting is not revenue-curve
        // shaped; instead require hinges small enough to keep R(1) near 1 and
        // rebase the curve through (1, R(1)) by scaling.
        PiecewiseFn u = unit[g];
        Rat r1 = u(Rat(1));
        if (r1 <= Rat(1, 2))
            throw std::invalid_argument("generate: flow hinges too heavy for item " +
                                        spec.poset.label(static_cast<ItemId>(g)));
        marginals.push_back(dist_from_curve(u.scaled(Rat(1) / r1), spec.H,
                                            spec.q[g] * r1));
    }
    // scaling by r1 changes Σq; renormalize masses
    Rat qs(0);
    for (const auto& md : marginals) qs += md.q;
    for (auto& md : marginals) md.q /= qs;

    Instance inst(spec.poset, spec.H, marginals);
    auto inst_defects = inst.validate();
    if (!inst_defects.empty())
        throw std::logic_error("generate: invalid instance: " + inst_defects.front());

    DualSolution d = DualSolution::zero(inst);
    for (size_t e = 0; e < edges.size(); ++e)
        for (const auto& a : flows[e])
            if (a.mass > 0) d.flow_ref(e).add_atom(a.at, a.mass / qs);
    d = properly_iron(inst, d);

    Generated out{std::move(inst), std::move(d), {}};
    out.profile = virtual_profile(out.instance, out.dual);

    // roundtrip: the prescription must be re-detected exactly
    for (size_t g = 0; g < m; ++g) {
        if (out.profile.r_lo[g] != spec.items[g].r_lo ||
            out.profile.r_hi[g] != spec.items[g].r_hi)
            throw std::logic_error("generate: zero-region endpoints drifted");
        if (out.profile.ironed[g].size() != spec.items[g].ironed.size())
            throw std::logic_error("generate: ironed interval count drifted");
        for (size_t i = 0; i < spec.items[g].ironed.size(); ++i)
            if (!(out.profile.ironed[g][i] == spec.items[g].ironed[i]))
                throw std::logic_error("generate: ironed interval drifted");
    }
    return out;
}

int max_chain_length(const Rat& H) {
    // default geometry: M chain points spaced across [H/4, H/2] with interval
    // midpoints between them; each gap must stay a usable width
    Rat span = H / 4;
    Rat min_step(1, 64);
    Rat steps = span / min_step;
    long cap = steps.convert_to<long>();
    return static_cast<int>(std::max(0L, cap));
}

ChainInstance generate_chain_instance(int M, const Rat& H) {
    if (M < 1) throw std::invalid_argument("chain length must be >= 1");
    if (H < 8) throw std::invalid_argument("chain instances need H >= 8");
    if (M > max_chain_length(H))
        throw std::invalid_argument("chain length too large for this horizon; max is " +
                                    std::to_string(max_chain_length(H)));

    ItemPoset poset({"A", "B", "C"}, {{2, 0}, {2, 1}});
    const ItemId A = 0, B = 1;

    // points x_1 > ... > x_M across [H/4, H/2]; two virtual continuation
    // points pin the bottom interval ends
    Rat x_hi = H / 2;
    Rat step = (H / 4) / Rat(M);
    std::vector<Rat> x(M + 3);
    for (int i = 1; i <= M + 2; ++i) x[i] = x_hi - Rat(i - 1) * step;

    auto item_of = [&](int i) { return (i % 2 == 1) ? A : B; };
    // interval of point i: [ (x_{i+1}+x_{i+2})/2 , (x_{i-1}+x_i)/2 ], with the
    // top two capped by the r_hi choices below
    std::vector<Interval> iv(M + 1);
    for (int i = 1; i <= M; ++i) {
        iv[i].lo = (x[i + 1] + x[i + 2]) / 2;
        iv[i].hi = (i >= 3) ? iv[i - 2].lo : Rat(0);  // fixed after r_hi known
    }
    Rat r_hi_A = x[1] + step / 2;
    Rat r_hi_B = (M >= 2) ? (x[1] + x[2]) / 2 : (x[1] + x[1] - step / 2) / 2;
    if (M == 1) r_hi_B = x[1] - step / 2;  // point zero region below x_1
    iv[1].hi = r_hi_A;
    if (M >= 2) iv[2].hi = r_hi_B;

    ItemCurveSpec specA, specB, specC;
    specA.r_hi = r_hi_A;
    specB.r_hi = r_hi_B;
    for (int i = 1; i <= M; ++i)
        (item_of(i) == A ? specA : specB).ironed.push_back(iv[i]);
    for (auto* s : {&specA, &specB})
        std::sort(s->ironed.begin(), s->ironed.end(),
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    specA.r_lo = specA.ironed.empty() ? r_hi_A : specA.ironed.front().lo;
    specB.r_lo = specB.ironed.empty() ? r_hi_B : specB.ironed.front().lo;
    if (M == 1) specB.r_lo = specB.r_hi;  // degenerate point region

    specC.r_lo = specA.r_lo * Rat(3, 4);
    specC.r_hi = x[1] + step;

    DualSpec spec;
    spec.poset = poset;
    spec.H = H;
    spec.q = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    spec.items = {specA, specB, specC};
    spec.flows.assign(2, {});
    for (int i = 1; i <= M; ++i) {
        spec.flows[0].push_back({x[i], Rat(0)});  // C -> A, auto mass
        spec.flows[1].push_back({x[i], Rat(0)});  // C -> B
    }

    Generated gen = generate(spec);

    ChainInstance out{std::move(gen.instance), std::move(gen.dual), {}, spec};
    for (int i = 1; i <= M; ++i)
        out.chain.points.push_back({x[i], item_of(i), iv[i]});

    // ground truth must be re-detected from scratch
    TopChain redetected = find_top_chain(out.instance, out.dual);
    if (redetected.length() != static_cast<size_t>(M))
        throw std::logic_error("chain factory: detected chain length " +
                               std::to_string(redetected.length()) + ", wanted " +
                               std::to_string(M));
    for (int i = 0; i < M; ++i) {
        if (redetected.points[i].x != out.chain.points[i].x ||
            redetected.points[i].item != out.chain.points[i].item)
            throw std::logic_error("chain factory: detected chain differs from truth");
    }
    SwapFindings sf = detect_swaps(out.instance, out.dual);
    if (!sf.none()) throw std::logic_error("chain factory: dual is not swap-free");
    return out;
}

}  // namespace ordermech
