#include "doctest.h"

#include "ordermech/master.hpp"
#include "ordermech/oracle.hpp"
#include "ordermech/verify.hpp"

using namespace ordermech;

static ItemPoset star3() { return ItemPoset({"A", "B", "C"}, {{2, 0}, {2, 1}}); }

TEST_CASE("curve_from_spec: shapes and pinned values") {
    Rat H(16);
    SUBCASE("no intervals, point zero region") {
        ItemCurveSpec s{Rat(4), Rat(4), {}};
        auto R = curve_from_spec(s, H);
        CHECK(R(Rat(1)) == Rat(1));
        // rises at slope 1/(2H) up to r_lo, then falls
        Rat level = Rat(1) + Rat(3) / (2 * H);
        CHECK(R(Rat(4)) == level);
        CHECK(R(Rat(2)) == Rat(1) + Rat(1) / (2 * H));
        CHECK(R(Rat(10)) < level);
        // slope bound on [1,H]
        for (size_t i = 1; i < R.pieces(); ++i) {
            Rat s_i = R.slopes()[i];
            CHECK(s_i <= Rat(1) / (2 * H));
            CHECK(s_i >= -Rat(1) / (2 * H));
        }
    }
    SUBCASE("one dimple") {
        ItemCurveSpec s{Rat(3), Rat(9), {{Rat(5), Rat(7)}}};
        auto R = curve_from_spec(s, H);
        Rat level = Rat(1) + Rat(2) / (2 * H);
        CHECK(R(Rat(3)) == level);
        CHECK(R(Rat(5)) == level);
        CHECK(R(Rat(7)) == level);
        // V-dimple midpoint dips by half-width * slope
        CHECK(R(Rat(6)) == level - Rat(1) / (2 * H));
        CHECK(R(Rat(9)) == level);
        auto ic = iron(R);
        REQUIRE(ic.ironed_intervals.size() == 1);
        CHECK(ic.ironed_intervals[0].lo == Rat(5));
        CHECK(ic.ironed_intervals[0].hi == Rat(7));
    }
}

TEST_CASE("dist_from_curve: constant revenue target and roundtrip") {
    Rat H(8);
    SUBCASE("R == 1 on [1,H] gives F = 1 - 1/x") {
        auto R = PiecewiseFn::from_points({Rat(0), Rat(1), Rat(2), Rat(4), Rat(8)},
                                          {Rat(0), Rat(1), Rat(1), Rat(1), Rat(1)});
        auto m = dist_from_curve(R, H);
        REQUIRE(m.validate().empty());
        auto F = cdf(m);
        // F matches delta + (1-delta)(1 - 1/x) at curve breakpoints
        Rat d = kDensityFloor;
        CHECK(F(Rat(2)) == d + (1 - d) * Rat(1, 2));
        CHECK(F(Rat(4)) == d + (1 - d) * Rat(3, 4));
        CHECK(F(Rat(8)) == Rat(1));
    }
    SUBCASE("roundtrip reproduces the curve below the smear region") {
        ItemCurveSpec s{Rat(2), Rat(6), {{Rat(3), Rat(4)}}};
        auto R = curve_from_spec(s, H);
        auto m = dist_from_curve(R, H, Rat(1, 2));
        REQUIRE(m.validate().empty());
        auto R2 = revenue_curve(m);
        Rat scale = Rat(1, 2) * (Rat(1) - kDensityFloor);
        // exact at every curve breakpoint below the smear region
        for (const Rat& b : R.breaks()) {
            if (b < Rat(1) || b > Rat(7)) continue;
            CHECK(R2(b) == scale * R(b));
        }
        // and between breakpoints (both linear)
        CHECK(R2(Rat(7, 2)) == scale * R(Rat(7, 2)));
        // monotone F sampled densely
        auto F = cdf(m);
        Rat prev(-1);
        for (int k = 0; k <= 160; ++k) {
            Rat v = Rat(k, 20);
            Rat fv = F(v);
            CHECK(fv >= prev);
            prev = fv;
        }
        CHECK(F(H) == m.q);
    }
}

TEST_CASE("generate: empty spec per item gives a DMR instance with zero dual") {
    DualSpec spec;
    spec.poset = star3();
    spec.H = Rat(16);
    spec.q = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    spec.items = {{Rat(4), Rat(6), {}}, {Rat(3), Rat(5), {}}, {Rat(2), Rat(7), {}}};
    spec.flows.assign(2, {});
    auto gen = generate(spec);
    CHECK(gen.instance.all_dmr());
    for (size_t g = 0; g < 3; ++g) {
        CHECK(gen.profile.ironed[g].empty());
        CHECK(gen.profile.r_lo[g] == spec.items[g].r_lo);
        CHECK(gen.profile.r_hi[g] == spec.items[g].r_hi);
        CHECK(gen.dual.lambda[g].max_value() == 0);
    }
}

TEST_CASE("generate: base gadget (one interval spanning A, flows at x1)") {
    // Fig-4 layout: A ironed across its whole zero region, B a point region
    // at x < x1, flow into both A and B at x1.
    DualSpec spec;
    spec.poset = star3();
    spec.H = Rat(16);
    spec.q = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    Rat x(5), x1(6);
    spec.items = {{Rat(4), Rat(7), {{Rat(4), Rat(7)}}},  // A: [r_lo, r_hi] ironed
                  {x, x, {}},                            // B: point zero region
                  {Rat(2), Rat(9), {}}};                 // C: DMR
    spec.flows.assign(2, {});
    spec.flows[0].push_back({x1, Rat(0)});
    spec.flows[1].push_back({x1, Rat(0)});
    auto gen = generate(spec);

    CHECK(gen.profile.r_lo[0] == Rat(4));
    CHECK(gen.profile.r_hi[0] == Rat(7));
    CHECK(gen.profile.r_lo[1] == x);
    CHECK(gen.profile.r_hi[1] == x);
    REQUIRE(gen.profile.ironed[0].size() == 1);

    TopChain chain = find_top_chain(gen.instance, gen.dual);
    REQUIRE(chain.length() == 1);
    CHECK(chain.points[0].x == x1);
    CHECK(chain.points[0].item == 0);

    CHECK(detect_swaps(gen.instance, gen.dual).none());
}

TEST_CASE("generate: interleaved two-interval layout gives chain length 2") {
    DualSpec spec;
    spec.poset = star3();
    spec.H = Rat(16);
    spec.q = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
    // B: [r_lo_B, r_hi_B] with r_lo_B < r_lo_A < r_hi_B < r_hi_A
    spec.items = {{Rat(5), Rat(8), {{Rat(5), Rat(8)}}},
                  {Rat(4), Rat(6), {{Rat(4), Rat(6)}}},
                  {Rat(2), Rat(10), {}}};
    spec.flows.assign(2, {});
    Rat x1(7), x2(11, 2);
    spec.flows[0] = {{x1, Rat(0)}, {x2, Rat(0)}};
    spec.flows[1] = {{x1, Rat(0)}, {x2, Rat(0)}};
    auto gen = generate(spec);
    TopChain chain = find_top_chain(gen.instance, gen.dual);
    REQUIRE(chain.length() == 2);
    CHECK(chain.points[0].x == x1);
    CHECK(chain.points[0].item == 0);
    CHECK(chain.points[1].x == x2);
    CHECK(chain.points[1].item == 1);
}

TEST_CASE("chain factory: lengths 1..6 roundtrip exactly") {
    for (int M : {1, 2, 3, 4, 5, 6}) {
        CAPTURE(M);
        auto ci = generate_chain_instance(M, Rat(16));
        CHECK(ci.chain.length() == static_cast<size_t>(M));
        CHECK(ci.instance.validate().empty());
        CHECK(ci.dual.validate(ci.instance).empty());
        CHECK(properly_monotone(ci.instance, ci.dual));
        // C unironed
        CHECK(ci.dual.lambda[2].max_value() == 0);
    }
    CHECK_THROWS_AS(generate_chain_instance(100000, Rat(16)), std::invalid_argument);
}

TEST_CASE("generated marginals stay valid distributions") {
    auto ci = generate_chain_instance(4, Rat(16));
    for (size_t g = 0; g < 3; ++g) {
        const auto& m = ci.instance.marginal(static_cast<ItemId>(g));
        CHECK(m.validate().empty());
        auto F = cdf(m);
        CHECK(F(Rat(0)) == 0);
        CHECK(F(Rat(16)) == m.q);
        const auto& d = m.density.icepts();
        for (const Rat& v : d) CHECK(v >= kDensityFloor);
    }
}
