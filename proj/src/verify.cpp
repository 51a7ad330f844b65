#include "ordermech/verify.hpp"

#include <algorithm>

namespace ordermech {

std::string to_string(CsCondition c) {
    switch (c) {
        case CsCondition::CS1: return "CS1";
        case CsCondition::CS2: return "CS2";
        case CsCondition::CS3: return "CS3";
        case CsCondition::CS4: return "CS4";
    }
    return "?";
}

CertificateReport cs_check(const Instance& inst, const Mechanism& mech,
                           const DualSolution& dual, const Rat& tol) {
    CertificateReport rep;
    VirtualProfile vp = virtual_profile(inst, dual);

    for (size_t gi = 0; gi < inst.items(); ++gi) {
        ItemId g = static_cast<ItemId>(gi);
        const std::string& name = inst.poset().label(g);
        PiecewiseFn f = vp.fphi[g].refined(mech.alloc(g).breaks());
        PiecewiseFn a = mech.alloc(g).refined(f.breaks());

        // CS1 / CS2 per piece: the allocation is constant on each piece and
        // the profile is linear, so its sign on the open piece is decided by
        // the one-sided endpoint values.
        const auto& b = f.breaks();
        for (size_t i = 0; i < f.pieces(); ++i) {
            Rat fl = f.piece_value(i, b[i]);
            Rat fr = f.piece_value(i, b[i + 1]);
            Rat av = a.icepts()[i];
            Rat top = std::max(fl, fr), bot = std::min(fl, fr);
            if (bot > tol && av != 1)
                rep.cs_violations.push_back({CsCondition::CS1, g, name, b[i], bot});
            if (top < -tol && av != 0)
                rep.cs_violations.push_back({CsCondition::CS2, g, name, b[i], -top});
            // mixed-sign pieces: check the strictly positive / negative parts
            if (bot <= tol && top > tol && av != 1 && f.slopes()[i] != 0) {
                // a portion of the piece is strictly positive
                rep.cs_violations.push_back({CsCondition::CS1, g, name, b[i], top});
            }
            if (top >= -tol && bot < -tol && av != 0 && f.slopes()[i] != 0)
                rep.cs_violations.push_back({CsCondition::CS2, g, name, b[i], -bot});
        }

        // CS3: allocation may only jump where lambda vanishes.
        auto jumps = jumps_of_step(mech.alloc(g));
        for (size_t j = 1; j < jumps.size(); ++j) {
            Rat lam = dual.lambda[g](jumps[j].at);
            if (lam > tol)
                rep.cs_violations.push_back({CsCondition::CS3, g, name, jumps[j].at, lam});
        }
    }

    // CS4: flow support requires utility equality across the edge.
    const auto& edges = inst.poset().edges();
    for (size_t e = 0; e < edges.size(); ++e) {
        const FlowVar* fv = dual.flow_on(e);
        if (!fv || fv->empty()) continue;
        auto [worse, better] = edges[e];
        std::string ename = "(" + inst.poset().label(worse) + "," +
                            inst.poset().label(better) + ")";
        PiecewiseFn du = mech.utility(worse) - mech.utility(better);
        auto check_at = [&](const Rat& v) {
            Rat gap = du(v);
            if (gap < 0) gap = -gap;
            if (gap > tol)
                rep.cs_violations.push_back({CsCondition::CS4, worse, ename, v, gap});
        };
        for (const auto& atom : fv->atoms)
            if (atom.mass > 0) check_at(atom.at);
        if (fv->density) {
            const auto& dens = *fv->density;
            const auto& db = dens.breaks();
            for (size_t i = 0; i < dens.pieces(); ++i) {
                if (dens.icepts()[i] <= 0) continue;
                check_at(db[i]);
                check_at(db[i + 1]);
                for (const Rat& k : du.breaks())
                    if (db[i] < k && k < db[i + 1]) check_at(k);
            }
        }
    }

    rep.ic_violations = ic_check(inst, mech);
    rep.revenue = revenue(inst, mech).expected_payment;
    rep.dual_value = dual_objective(inst, dual);
    rep.duality_gap = rep.dual_value - rep.revenue;
    return rep;
}

}  // namespace ordermech
