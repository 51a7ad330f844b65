#include "doctest.h"

#include "ordermech/master.hpp"
#include "ordermech/oracle.hpp"
#include "ordermech/verify.hpp"

#include <random>

using namespace ordermech;

TEST_CASE("simplex: small known LPs") {
    SUBCASE("bounded optimum with duals") {
        // max 5x + 8y s.t. 2x+3y <= 12, x+2y <= 7, x,y >= 0
        LinearProgram lp;
        lp.c = {Rat(5), Rat(8)};
        lp.add_row({Rat(2), Rat(3)}, RowSense::LE, Rat(12));
        lp.add_row({Rat(1), Rat(2)}, RowSense::LE, Rat(7));
        auto r = solve_lp_exact(lp);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == Rat(31));  // x=3, y=2
        CHECK(r.x[0] == Rat(3));
        CHECK(r.x[1] == Rat(2));
        // dual feasibility: c_j <= sum_i y_i A_ij, and y >= 0 on <= rows
        CHECK(r.y[0] >= 0);
        CHECK(r.y[1] >= 0);
        CHECK(Rat(5) <= 2 * r.y[0] + r.y[1]);
        CHECK(Rat(8) <= 3 * r.y[0] + 2 * r.y[1]);
        // strong duality
        CHECK(12 * r.y[0] + 7 * r.y[1] == r.objective);
    }
    SUBCASE("equality rows and negative rhs") {
        // max x + y s.t. x - y = -1, x + y <= 5
        LinearProgram lp;
        lp.c = {Rat(1), Rat(1)};
        lp.add_row({Rat(1), Rat(-1)}, RowSense::EQ, Rat(-1));
        lp.add_row({Rat(1), Rat(1)}, RowSense::LE, Rat(5));
        auto r = solve_lp_exact(lp);
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == Rat(5));
    }
    SUBCASE("infeasible") {
        LinearProgram lp;
        lp.c = {Rat(1)};
        lp.add_row({Rat(1)}, RowSense::GE, Rat(3));
        lp.add_row({Rat(1)}, RowSense::LE, Rat(1));
        CHECK(solve_lp_exact(lp).status == LpStatus::Infeasible);
    }
    SUBCASE("unbounded") {
        LinearProgram lp;
        lp.c = {Rat(1)};
        lp.add_row({Rat(-1)}, RowSense::LE, Rat(0));
        CHECK(solve_lp_exact(lp).status == LpStatus::Unbounded);
    }
}

static Instance uniform_single(Rat H = Rat(1)) {
    MarginalDist m;
    m.q = Rat(1);
    m.density = PiecewiseFn::constant(Rat(0), H, Rat(1) / H);
    return Instance(ItemPoset({"A"}, {}), H, {m});
}

TEST_CASE("discretize: pinned two-cell example") {
    Instance inst = uniform_single();
    GridInstance g = discretize(inst, 2);
    REQUIRE(g.n() == 2);
    CHECK(g.v[0] == Rat(1, 2));
    CHECK(g.v[1] == Rat(1));
    CHECK(g.mass[0][0] == Rat(1, 2));
    CHECK(g.mass[0][1] == Rat(1, 2));
    CHECK(g.phi_hat(0, 0) == Rat(0));
    CHECK(g.phi_hat(0, 1) == Rat(1));
}

TEST_CASE("discrete virtual values converge to the instance virtual values") {
    Instance inst = uniform_single();
    Rat v(7, 10);
    // canonical phi at v: v - mass_above(v) / f_canon(v), with
    // f_canon = (R - R'v)/v^2 on the curve piece containing v
    const PiecewiseFn& R = inst.curve(0);
    auto phi_canon = [&](const Rat& w) {
        size_t p = 0;
        while (p + 1 < R.pieces() && R.breaks()[p + 1] <= w) ++p;
        Rat slope = R.slopes()[p];
        Rat f = (R(w) - slope * w) / (w * w);
        return w - inst.mass_above(0, w) / f;
    };
    for (size_t n : {50, 100, 200, 400}) {
        GridInstance g = discretize(inst, n);
        size_t i = std::lower_bound(g.v.begin(), g.v.end(), v) - g.v.begin();
        Rat err = g.phi_hat(0, i) - phi_canon(g.v[i]);
        if (err < 0) err = -err;
        CHECK(err <= Rat(4) / Rat(static_cast<long>(n)));
    }
    // and the canonical phi itself tracks the exact 2v-1 within the
    // (reported) curve sampling error
    Rat drift = phi_canon(v) - (2 * v - 1);
    if (drift < 0) drift = -drift;
    CHECK(drift <= Rat(1, 10));
}

TEST_CASE("grid LP: single item posts the discrete reserve") {
    Instance inst = uniform_single();
    GridInstance g = discretize(inst, 40);
    LPSolution s = solve_grid_lp(g);
    // discrete optimum: best posted price over the grid
    auto det = best_deterministic(g);
    CHECK(s.objective == det.revenue);
    // allocation is a 0/1 threshold
    for (size_t i = 0; i < g.n(); ++i)
        CHECK((s.alloc[0][i] == 0 || s.alloc[0][i] == 1));
    // monotonicity multipliers: valid and zero at the top
    for (size_t i = 0; i + 1 < g.n(); ++i) CHECK(s.mono_dual[0][i] >= 0);
}

TEST_CASE("grid LP equals vertex enumeration on tiny instances") {
    std::mt19937 rng(31337);
    for (int trial = 0; trial < 8; ++trial) {
        // two items, line poset, random masses on up to 4 grid points
        int n = 3 + static_cast<int>(rng() % 2);
        GridInstance g;
        g.poset = ItemPoset({"A", "C"}, {{1, 0}});
        g.H = Rat(n);
        for (int i = 1; i <= n; ++i) g.v.push_back(Rat(i));
        g.mass.assign(2, {});
        std::vector<long> w(2 * n);
        long total = 0;
        for (auto& x : w) { x = 1 + rng() % 9; total += x; }
        for (int gi = 0; gi < 2; ++gi)
            for (int i = 0; i < n; ++i)
                g.mass[gi].push_back(Rat(w[gi * n + i], total));
        LPSolution s = solve_grid_lp(g);
        Rat brute = enumerate_vertices_optimum(g);
        CHECK(s.objective == brute);
    }
}

TEST_CASE("sandwich: best deterministic <= LP <= discretized dual objective") {
    auto ci = generate_chain_instance(2, Rat(16));
    GridInstance g = discretize(ci.instance, 60);
    LPSolution s = solve_grid_lp(g);
    auto det = best_deterministic(g);
    CHECK(det.revenue <= s.objective);
    Rat dub = grid_dual_objective(g, ci.dual);
    CHECK(s.objective <= dub);
}

TEST_CASE("grid LP solution converts to a clean mechanism") {
    Instance inst = uniform_single(Rat(2));
    GridInstance g = discretize(inst, 16);
    LPSolution s = solve_grid_lp(g);
    Mechanism mech = mechanism_from_grid(g, s);
    CHECK(ic_check(inst, mech).empty());
    // discrete objective equals the exact expected payment of the mechanism
    // (masses sit at cell right edges; steps land on grid points)
    RevenueReport rr = revenue(inst, mech);
    CHECK(rr.expected_payment <= s.objective);
}

TEST_CASE("myerson pair passes cs_check with zero gap; shifted price fails") {
    Instance inst = uniform_single();
    DualSolution d = DualSolution::zero(inst);
    Mechanism mech = posted_prices(inst, {Rat(1, 2)});
    CertificateReport rep = cs_check(inst, mech, d);
    CHECK(rep.clean());
    CHECK(rep.duality_gap == 0);

    Mechanism off = posted_prices(inst, {Rat(3, 5)});
    CertificateReport rep2 = cs_check(inst, off, d);
    CHECK_FALSE(rep2.clean());
    bool found = false;
    for (auto& v : rep2.cs_violations)
        if (v.condition == CsCondition::CS1 || v.condition == CsCondition::CS2) found = true;
    CHECK(found);
    CHECK(rep2.duality_gap > 0);
}
