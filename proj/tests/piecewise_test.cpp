#include "doctest.h"

#include "ordermech/piecewise.hpp"

#include <random>

using namespace ordermech;

TEST_CASE("from_points interpolates and evaluates right-continuously") {
    auto f = PiecewiseFn::from_points({Rat(0), Rat(1), Rat(2)}, {Rat(0), Rat(2), Rat(1)});
    CHECK(f(Rat(0)) == Rat(0));
    CHECK(f(Rat(1, 2)) == Rat(1));
    CHECK(f(Rat(1)) == Rat(2));
    CHECK(f(Rat(3, 2)) == Rat(3, 2));
    CHECK(f(Rat(2)) == Rat(1));
    CHECK(f.continuous());
}

TEST_CASE("step functions jump right-continuously") {
    auto s = PiecewiseFn::step({Rat(0), Rat(1), Rat(3)}, {Rat(2), Rat(5)});
    CHECK(s(Rat(0)) == Rat(2));
    CHECK(s(Rat(1)) == Rat(5));
    CHECK(s.value_left(Rat(1)) == Rat(2));
    CHECK(s(Rat(3)) == Rat(5));
    CHECK(s.is_step());
    CHECK_FALSE(s.continuous());
}

TEST_CASE("arithmetic merges breakpoints") {
    auto a = PiecewiseFn::from_points({Rat(0), Rat(2)}, {Rat(0), Rat(2)});
    auto b = PiecewiseFn::from_points({Rat(0), Rat(1), Rat(2)}, {Rat(1), Rat(0), Rat(1)});
    auto c = a + b;
    CHECK(c(Rat(0)) == Rat(1));
    CHECK(c(Rat(1)) == Rat(1));
    CHECK(c(Rat(2)) == Rat(3));
    auto d = a - b;
    CHECK(d(Rat(1)) == Rat(1));
}

TEST_CASE("integral and positive-part integral are exact") {
    // f(v) = v - 1 on [0,2]: integral 0, positive part 1/2
    auto f = PiecewiseFn::from_points({Rat(0), Rat(2)}, {Rat(-1), Rat(1)});
    CHECK(f.integral() == Rat(0));
    CHECK(f.integral_pos() == Rat(1, 2));
    CHECK(f.integral(Rat(1), Rat(2)) == Rat(1, 2));
}

TEST_CASE("antiderivative of a step function is exact") {
    auto s = PiecewiseFn::step({Rat(0), Rat(1), Rat(2)}, {Rat(1), Rat(3)});
    auto F = s.antiderivative();
    CHECK(F(Rat(0)) == Rat(0));
    CHECK(F(Rat(1)) == Rat(1));
    CHECK(F(Rat(2)) == Rat(4));
    CHECK(F(Rat(3, 2)) == Rat(5, 2));
}

TEST_CASE("upper concave envelope matches brute force over vertex pairs") {
    // Spec fixture: vertices (0,0),(1,1),(2,0.2),(3,1.2),(4,0)
    std::vector<Rat> xs{Rat(0), Rat(1), Rat(2), Rat(3), Rat(4)};
    std::vector<Rat> ys{Rat(0), Rat(1), Rat(1, 5), Rat(6, 5), Rat(0)};
    auto base = PiecewiseFn::from_points(xs, ys);
    auto hull = upper_concave_envelope(base);

    // Independent oracle: hull(v) = max over vertex pairs of the chord value.
    auto brute = [&](const Rat& v) {
        Rat best = base(v);
        for (size_t i = 0; i < xs.size(); ++i)
            for (size_t j = i + 1; j < xs.size(); ++j) {
                if (!(xs[i] <= v && v <= xs[j])) continue;
                Rat chord = ys[i] + (ys[j] - ys[i]) * (v - xs[i]) / (xs[j] - xs[i]);
                best = std::max(best, chord);
            }
        return best;
    };
    for (int k = 0; k <= 40; ++k) {
        Rat v = Rat(k, 10);
        CHECK(hull(v) == brute(v));
    }

    // The dip at v=2 must be ironed: hull linear from (1,1) to (3,1.2).
    auto iv = intervals_where_above(hull, base);
    REQUIRE(iv.size() == 1);
    CHECK(iv[0].lo == Rat(1));
    CHECK(iv[0].hi == Rat(3));
    CHECK(hull(Rat(2)) == Rat(11, 10));

    // Interior ironed points interpolate: z = beta*a + (1-beta)*b.
    Rat beta(1, 2);
    CHECK(hull(Rat(2)) == beta * base(Rat(1)) + (1 - beta) * base(Rat(3)));
}

TEST_CASE("envelope is idempotent and dominates the base") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + static_cast<int>(rng() % 8);
        std::vector<Rat> xs, ys;
        for (int i = 0; i <= n; ++i) {
            xs.push_back(Rat(i));
            ys.push_back(Rat(static_cast<long>(rng() % 1000), 100));
        }
        auto base = PiecewiseFn::from_points(xs, ys);
        auto hull = upper_concave_envelope(base);
        auto hull2 = upper_concave_envelope(hull);
        for (int k = 0; k <= 4 * n; ++k) {
            Rat v = Rat(k, 4);
            CHECK(hull(v) >= base(v));
            CHECK(hull2(v) == hull(v));
        }
        // concavity: slopes nonincreasing
        const auto& s = hull.slopes();
        for (size_t i = 0; i + 1 < s.size(); ++i) CHECK(s[i] >= s[i + 1]);
        // equality at ironed interval endpoints
        for (auto& iv : intervals_where_above(hull, base)) {
            CHECK(hull(iv.lo) == base(iv.lo));
            CHECK(hull(iv.hi) == base(iv.hi));
        }
    }
}

TEST_CASE("step jump helpers round-trip") {
    auto s = step_from_jumps(Rat(0), Rat(4), {{Rat(1), Rat(1, 3)}, {Rat(3), Rat(1)}});
    CHECK(s(Rat(0)) == Rat(0));
    CHECK(s(Rat(1)) == Rat(1, 3));
    CHECK(s(Rat(2)) == Rat(1, 3));
    CHECK(s(Rat(3)) == Rat(1));
    auto j = jumps_of_step(s);
    REQUIRE(j.size() == 3);  // includes the initial zero level
    CHECK(j[1].at == Rat(1));
    CHECK(j[1].value == Rat(1, 3));
    CHECK(j[2].at == Rat(3));
    CHECK(j[2].value == Rat(1));
}
