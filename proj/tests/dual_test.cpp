#include "doctest.h"

#include "ordermech/dual.hpp"
#include "ordermech/master.hpp"
#include "ordermech/verify.hpp"

using namespace ordermech;

static Instance uniform_single() {
    MarginalDist m;
    m.q = Rat(1);
    m.density = PiecewiseFn::constant(Rat(0), Rat(1), Rat(1));
    return Instance(ItemPoset({"A"}, {}), Rat(1), {m});
}

TEST_CASE("zero dual reproduces the Myerson profile") {
    Instance inst = uniform_single();
    DualSolution d = DualSolution::zero(inst);
    VirtualProfile vp = virtual_profile(inst, d);
    // fphi = gamma; zero region collapses to the reserve 1/2
    CHECK(vp.r_lo[0] == Rat(1, 2));
    CHECK(vp.r_hi[0] == Rat(1, 2));
    CHECK(vp.ironed[0].empty());
    CHECK(dual_objective(inst, d) == Rat(1, 4));
}

TEST_CASE("flow direction: into the receiver lowers, out of the sender raises") {
    ItemPoset p({"A", "C"}, {{1, 0}});
    MarginalDist mA, mC;
    mA.q = Rat(1, 2);
    mA.density = PiecewiseFn::constant(Rat(0), Rat(2), Rat(1, 2));
    mC = mA;
    Instance inst(p, Rat(2), {mA, mC});
    DualSolution d0 = DualSolution::zero(inst);
    DualSolution d1 = d0;
    Rat at(3, 2), mu(1, 10);
    d1.flow_ref(0).add_atom(at, mu);
    VirtualProfile v0 = virtual_profile(inst, d0);
    VirtualProfile v1 = virtual_profile(inst, d1);
    // receiver A: lowered by mu strictly below the atom, unchanged above
    CHECK(v1.fphi[0](Rat(1)) == v0.fphi[0](Rat(1)) - mu);
    CHECK(v1.fphi[0](Rat(7, 4)) == v0.fphi[0](Rat(7, 4)));
    // sender C: raised by mu below, unchanged above
    CHECK(v1.fphi[1](Rat(1)) == v0.fphi[1](Rat(1)) + mu);
    CHECK(v1.fphi[1](Rat(7, 4)) == v0.fphi[1](Rat(7, 4)));
    // tail convention: the atom's own position is included
    CHECK(d1.flow_on(0)->tail_at(at, inst.H()) == mu);
    CHECK(d1.flow_on(0)->tail_at(at + Rat(1, 100), inst.H()) == 0);
}

TEST_CASE("properly_iron: monotone profile untouched, down-jump bridged") {
    SUBCASE("DMR marginals with zero flow stay unironed") {
        Instance inst = uniform_single();
        DualSolution d = properly_iron(inst, DualSolution::zero(inst));
        CHECK(d.lambda[0].max_value() == 0);
    }
    SUBCASE("a single down-jump creates one ironed interval") {
        // density with a hole: revenue dips, gamma jumps down
        MarginalDist m;
        m.q = Rat(1);
        m.density = PiecewiseFn::step({Rat(0), Rat(1), Rat(3), Rat(4)},
                                      {Rat(399, 1000), Rat(1, 1000), Rat(599, 1000)});
        REQUIRE(m.validate().empty());
        Instance inst(ItemPoset({"A"}, {}), Rat(4), {m});
        DualSolution d = properly_iron(inst, DualSolution::zero(inst));
        VirtualProfile vp = virtual_profile(inst, d);
        REQUIRE(vp.ironed[0].size() == 1);
        // profile constant across the ironed interval
        const Interval& iv = vp.ironed[0][0];
        Rat inside = vp.fphi[0]((iv.lo + iv.hi) / 2);
        CHECK(vp.fphi[0](iv.lo) == inside);
        CHECK(properly_monotone(inst, d));

        // independent oracle: concave envelope of Γ on a fine grid
        PiecewiseFn f0 = fphi_unironed(inst, DualSolution::zero(inst), 0);
        PiecewiseFn Gamma = f0.antiderivative().negated();
        auto hull = upper_concave_envelope(Gamma);
        for (int k = 0; k <= 64; ++k) {
            Rat v(k, 16);
            CHECK(d.lambda[0](v) == hull(v) - Gamma(v));
        }
        // integral preservation across the ironed interval
        PiecewiseFn fI = vp.fphi[0];
        CHECK(fI.integral(iv.lo, iv.hi) == f0.integral(iv.lo, iv.hi));
    }
}

TEST_CASE("weak duality against feasible primals on the chain instance") {
    auto ci = generate_chain_instance(2, Rat(16));
    Rat dual_val = dual_objective(ci.instance, ci.dual);
    // any IC posted-price vector is a feasible primal
    for (int k = 1; k <= 5; ++k) {
        Rat p = Rat(2 * k);
        Mechanism mech = posted_prices(ci.instance, {p, p, p});
        Rat rev = revenue(ci.instance, mech).expected_payment;
        CHECK(dual_val >= rev);
    }
}

TEST_CASE("boosting: zero dual vs boosted dual objective never increases") {
    ItemPoset p({"A", "C"}, {{1, 0}});
    MarginalDist mA, mC;
    mA.q = Rat(1, 2);
    mA.density = PiecewiseFn::constant(Rat(0), Rat(2), Rat(1, 2));
    mC = mA;
    Instance inst(p, Rat(2), {mA, mC});
    DualSolution d0 = DualSolution::zero(inst);
    VirtualProfile v0 = virtual_profile(inst, d0);
    // boost: send C's negative mass at y into A
    Rat y(1, 2);
    Rat deficit = -v0.fphi[1](y);
    REQUIRE(deficit > 0);
    DualSolution d1 = d0;
    d1.flow_ref(0).add_atom(y, deficit);
    CHECK(dual_objective(inst, d1) <= dual_objective(inst, d0));
}

TEST_CASE("swap detection and removal on constructed duals") {
    // start from a clean 2-chain and inject a double swap: extra flow into
    // the top item strictly inside [x̲_1, x2)
    DualSpec spec;
    spec.poset = ItemPoset({"A", "B", "C"}, {{2, 0}, {2, 1}});
    spec.H = Rat(16);
    spec.q = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    spec.items = {{Rat(5), Rat(8), {{Rat(5), Rat(8)}}},
                  {Rat(4), Rat(6), {{Rat(4), Rat(6)}}},
                  {Rat(2), Rat(10), {}}};
    spec.flows.assign(2, {});
    Rat x1(7), x2(11, 2), z(21, 4);  // z in [5, x2)
    spec.flows[0] = {{x1, Rat(0)}, {x2, Rat(0)}, {z, Rat(0)}};
    spec.flows[1] = {{x1, Rat(0)}, {x2, Rat(0)}};
    auto gen = generate(spec);

    SwapFindings sf = detect_swaps(gen.instance, gen.dual);
    REQUIRE(sf.double_swaps.size() == 1);
    CHECK(sf.double_swaps[0].x == x1);
    CHECK(sf.double_swaps[0].y == x2);
    CHECK(sf.double_swaps[0].z == z);

    Rat obj_before = dual_objective(gen.instance, gen.dual);
    size_t intervals_before = 0;
    VirtualProfile vb = virtual_profile(gen.instance, gen.dual);
    for (auto& iv : vb.ironed) intervals_before += iv.size();

    DualSolution fixed = remove_double_swap(gen.instance, gen.dual, sf.double_swaps[0]);
    CHECK(dual_objective(gen.instance, fixed) == obj_before);
    size_t intervals_after = 0;
    VirtualProfile va = virtual_profile(gen.instance, fixed);
    for (auto& iv : va.ironed) intervals_after += iv.size();
    CHECK(intervals_after < intervals_before);

    // an oversized eps is rejected with the admissible bound in the message
    CHECK_THROWS_AS(remove_double_swap(gen.instance, gen.dual, sf.double_swaps[0], Rat(1000)),
                    std::domain_error);
}

TEST_CASE("upper swap removal lowers the positives and keeps the objective") {
    DualSpec spec;
    spec.poset = ItemPoset({"A", "B", "C"}, {{2, 0}, {2, 1}});
    spec.H = Rat(16);
    spec.q = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    spec.items = {{Rat(5), Rat(7), {{Rat(5), Rat(7)}}},
                  {Rat(3), Rat(4), {}},
                  {Rat(2), Rat(10), {}}};
    spec.flows.assign(2, {});
    Rat x(8), y(6);  // x > r̄_A = 7 > y = 6 > r̄_B = 4
    spec.flows[0] = {{x, Rat(0)}};
    spec.flows[1] = {{y, Rat(0)}};
    auto gen = generate(spec);

    SwapFindings sf = detect_swaps(gen.instance, gen.dual);
    REQUIRE(sf.upper_swaps.size() == 1);
    CHECK(sf.upper_swaps[0].x == x);
    CHECK(sf.upper_swaps[0].y == y);

    VirtualProfile before = virtual_profile(gen.instance, gen.dual);
    Rat obj_before = dual_objective(gen.instance, gen.dual);
    DualSolution fixed = remove_upper_swap(gen.instance, gen.dual, sf.upper_swaps[0]);
    VirtualProfile after = virtual_profile(gen.instance, fixed);
    CHECK(dual_objective(gen.instance, fixed) == obj_before);
    // lexicographic (r̄_A, r̄_B, r̄_C) strictly decreases
    CHECK(after.r_hi[0] < before.r_hi[0]);
}

TEST_CASE("best dual fixpoint certifies swap-freeness") {
    DualSpec spec;
    spec.poset = ItemPoset({"A", "B", "C"}, {{2, 0}, {2, 1}});
    spec.H = Rat(16);
    spec.q = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    spec.items = {{Rat(5), Rat(8), {{Rat(5), Rat(8)}}},
                  {Rat(4), Rat(6), {{Rat(4), Rat(6)}}},
                  {Rat(2), Rat(10), {}}};
    spec.flows.assign(2, {});
    spec.flows[0] = {{Rat(7), Rat(0)}, {Rat(11, 2), Rat(0)}, {Rat(21, 4), Rat(0)}};
    spec.flows[1] = {{Rat(7), Rat(0)}, {Rat(11, 2), Rat(0)}};
    auto gen = generate(spec);
    DualSolution best = best_dual_fixpoint(gen.instance, gen.dual);
    CHECK(detect_swaps(gen.instance, best).none());
    CHECK(dual_objective(gen.instance, best) == dual_objective(gen.instance, gen.dual));
}
