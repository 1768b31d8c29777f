#include <doctest.h>

#include <padlex/geometry.hpp>

#include <set>
#include <vector>

using namespace padlex;

namespace {

PadicScalar Q(int64_t p, const std::string& s) { return PadicScalar::parse(p, s); }

AngularClass cls(int64_t p, int32_t m, int64_t r) { return AngularClass(p, m, Zint(r)); }

}  // namespace

TEST_CASE("ball membership matches order and angular residue") {
    // members of B have order exactly 1 and unit residue 1 mod 9
    Ball b(1, PadicScalar::zero(3), cls(3, 2, 1));
    CHECK(b.contains(Q(3, "3")));
    CHECK_FALSE(b.contains(Q(3, "12")));   // 12/3 = 4, not 1 mod 9
    CHECK(b.contains(Q(3, "30")));         // 30/3 = 10 = 1 mod 9
    CHECK_FALSE(b.contains(Q(3, "9")));    // wrong order
    CHECK_FALSE(b.contains(Q(3, "1/3")));  // wrong order
    CHECK_FALSE(b.contains(PadicScalar::zero(3)));
}

TEST_CASE("ball canonical point and diameter") {
    Ball b(1, PadicScalar::zero(3), cls(3, 2, 1));
    CHECK(b.canonical_point() == Q(3, "3"));
    CHECK(b.diameter() == Norm::p_power(-3));

    Ball b2(0, Q(5, "2"), cls(5, 1, 3));
    CHECK(b2.canonical_point() == Q(5, "5"));

    Ball b3(-1, PadicScalar::zero(3), cls(3, 1, 2));
    CHECK(b3.canonical_point() == Q(3, "2/3"));
    CHECK(b3.diameter() == Norm::one());
}

TEST_CASE("ball really is the closed ball around its canonical point") {
    // exhaustively compare the (order, residue) description against
    // |x - w| <= diameter on a lattice that covers orders -1..5
    Ball b(1, PadicScalar::zero(3), cls(3, 2, 1));
    PadicScalar w = b.canonical_point();
    for (int64_t k = -364; k <= 364; ++k) {
        PadicScalar x = PadicScalar::from_ratio(3, Zint(k), Zint(3));
        bool in_ball = !x.is_exact_zero() && b.contains(x);
        bool in_closed = (x - w).norm() <= b.diameter();
        CAPTURE(k);
        CHECK(in_ball == in_closed);
    }
}

TEST_CASE("ball distance") {
    Ball b(1, PadicScalar::zero(3), cls(3, 2, 1));
    CHECK(b.distance_to(Q(3, "30")) == Norm::zero());
    CHECK(b.distance_to(Q(3, "4")) == Norm::one());
    CHECK(b.distance_to(PadicScalar::zero(3)) == Norm::p_power(-1));
    // distance to a member of the sibling residue ball: orders agree,
    // residues split at depth 1, so the gap has order 1+1
    CHECK(b.distance_to(Q(3, "12")) == Norm::p_power(-2));
}

TEST_CASE("ball distance honours approximate inputs") {
    Ball b(1, PadicScalar::zero(3), cls(3, 2, 1));
    // x = 3 + O(3^7): difference from w = 3 is an approximate zero known
    // to order >= 7 > 3, inside the radius
    PadicScalar x = PadicScalar::approx(3, 0, Zint(1), 7) * Q(3, "3");
    CHECK(b.distance_to(x) == Norm::zero());
    CHECK(b.contains(x));
    // too shallow to decide
    PadicScalar y = PadicScalar::approx(3, 1, Zint(1), 1);
    CHECK_THROWS_AS(b.contains(y), InsufficientPrecision);
}

TEST_CASE("fiber ball enumeration in a window") {
    CellFiber f(PadicScalar::zero(5), CosetSpec{Q(5, "1"), 1, 2}, std::nullopt, std::nullopt);
    auto bs = f.balls(0, 3);
    REQUIRE(bs.size() == 2);
    CHECK(bs[0].order() == 0);
    CHECK(bs[1].order() == 2);
    CHECK(bs[0].klass().residue() == Zint(1));

    // a lower bound pushes the first admissible order up to 4
    CellFiber g(PadicScalar::zero(5), CosetSpec{Q(5, "1"), 1, 2}, 3, std::nullopt);
    auto gs = g.balls(0, 5);
    REQUIRE(gs.size() == 1);
    CHECK(gs[0].order() == 4);
}

TEST_CASE("fiber bounds are normalised to admissible orders") {
    CellFiber f(PadicScalar::zero(3), CosetSpec{Q(3, "3"), 1, 2}, 0, 5);
    // admissible orders are odd (xi has order 1, step 2)
    CHECK(f.l_min() == 1);
    CHECK(f.l_max() == 5);
    CHECK(f.admits_order(3));
    CHECK_FALSE(f.admits_order(2));
    CHECK_THROWS_AS(CellFiber(PadicScalar::zero(3), CosetSpec{Q(3, "3"), 1, 2}, 4, 4),
                    std::invalid_argument);
}

TEST_CASE("point fibers have no balls") {
    CellFiber f(Q(3, "2"), CosetSpec{PadicScalar::zero(3), 1, 1}, std::nullopt, std::nullopt);
    CHECK(f.is_zero_cell());
    CHECK(f.contains(Q(3, "2")));
    CHECK_FALSE(f.contains(Q(3, "5")));
    CHECK_THROWS_AS(f.ball_at(0), ZeroCellHasNoBalls);
    CHECK_THROWS_AS(f.balls(-3, 3), ZeroCellHasNoBalls);
    CHECK(f.distance_to(Q(3, "5")) == Norm::p_power(-1));
    CHECK(f.nearest_point(Q(3, "5")) == Q(3, "2"));
}

TEST_CASE("fiber membership") {
    CellFiber f(PadicScalar::zero(3), CosetSpec{Q(3, "1"), 2, 2}, std::nullopt, std::nullopt);
    CHECK(f.contains(Q(3, "9")));          // order 2, residue 1 mod 9
    CHECK(f.contains(Q(3, "82")));         // order 0, 82 = 1 mod 9
    CHECK_FALSE(f.contains(Q(3, "3")));    // odd order
    CHECK_FALSE(f.contains(Q(3, "36")));   // order 2 but residue 4
    CHECK_FALSE(f.contains(PadicScalar::zero(3)));

    CellFiber bounded(PadicScalar::zero(3), CosetSpec{Q(3, "1"), 2, 2}, 0, 2);
    CHECK(bounded.contains(Q(3, "9")));
    CHECK_FALSE(bounded.contains(Q(3, "81")));  // order 4 above the cap
}

TEST_CASE("fiber proximity picks the closest ball") {
    CellFiber f(PadicScalar::zero(3), CosetSpec{Q(3, "1"), 2, 2}, std::nullopt, std::nullopt);

    SUBCASE("member") {
        auto pr = f.proximity(Q(3, "9"));
        CHECK(pr.member);
        CHECK(pr.dist == Norm::zero());
        CHECK(pr.ball_l == 2);
    }
    SUBCASE("same order, residue agreeing to depth 1") {
        // 36 = 4*9, residue 4 agrees with 1 mod 3 but not mod 9
        auto pr = f.proximity(Q(3, "36"));
        CHECK_FALSE(pr.member);
        CHECK(pr.dist == Norm::p_power(-3));
        CHECK(pr.ball_l == 2);
    }
    SUBCASE("same order, residues split immediately: tie broken to lower order") {
        // 18 = 2*9: distance to the order-2 ball and to the order-4 ball
        // are both 3^-2; report the lower order
        auto pr = f.proximity(Q(3, "18"));
        CHECK(pr.dist == Norm::p_power(-2));
        CHECK(pr.ball_l == 2);
    }
    SUBCASE("inadmissible order lands between two balls") {
        auto pr = f.proximity(Q(3, "3"));
        CHECK(pr.dist == Norm::p_power(-1));
        CHECK(pr.ball_l == 2);
    }
    SUBCASE("center of an upward-unbounded fiber is at distance zero, unattained") {
        auto pr = f.proximity(PadicScalar::zero(3));
        CHECK(pr.at_center);
        CHECK(pr.dist == Norm::zero());
        CHECK_FALSE(pr.member);
        CHECK_THROWS_AS(f.nearest_point(PadicScalar::zero(3)), std::invalid_argument);
    }
}

TEST_CASE("proximity at the center of a bounded fiber") {
    CellFiber f(PadicScalar::zero(3), CosetSpec{Q(3, "1"), 2, 2}, std::nullopt, 2);
    auto pr = f.proximity(PadicScalar::zero(3));
    CHECK_FALSE(pr.at_center);
    CHECK(pr.dist == Norm::p_power(-2));
    CHECK(pr.ball_l == 2);
    CHECK(f.nearest_point(PadicScalar::zero(3)) == Q(3, "9"));

    // an approximate zero known past the top order behaves like the center
    PadicScalar nz = PadicScalar::approx_zero(3, 5);
    CHECK(f.distance_to(nz) == Norm::p_power(-2));
}

TEST_CASE("fiber nearest point attains the distance") {
    CellFiber f(PadicScalar::zero(3), CosetSpec{Q(3, "1"), 2, 2}, std::nullopt, std::nullopt);
    PadicScalar x = Q(3, "18");
    PadicScalar y = f.nearest_point(x);
    CHECK(y == Q(3, "9"));
    CHECK((x - y).norm() == f.distance_to(x));
    CHECK(f.contains(y));
}

TEST_CASE("fiber balls are disjoint and cover the fiber") {
    CellFiber f(Q(3, "1"), CosetSpec{Q(3, "1"), 1, 1}, 0, 2);
    auto bs = f.balls(-5, 5);
    REQUIRE(bs.size() == 3);
    for (int64_t k = 0; k <= 81; ++k) {
        PadicScalar x = PadicScalar::from_int(3, Zint(k));
        int hits = 0;
        for (const auto& b : bs)
            if (!(x - f.center()).is_exact_zero() && b.contains(x)) ++hits;
        bool in_fiber = !(x - f.center()).is_exact_zero() && f.contains(x);
        CAPTURE(k);
        CHECK(hits == (in_fiber ? 1 : 0));
    }
}

TEST_CASE("restricting a fiber narrows its window") {
    CellFiber f(PadicScalar::zero(5), CosetSpec{Q(5, "1"), 1, 2}, std::nullopt, std::nullopt);
    CellFiber g = f.restricted(1, 7);
    CHECK(g.l_min() == 2);
    CHECK(g.l_max() == 6);
    CHECK_FALSE(g.contains(Q(5, "1")));
    CHECK(g.contains(Q(5, "25")));
    CHECK_THROWS_AS(f.restricted(3, 1), std::invalid_argument);
}

TEST_CASE("distance from a point to a set") {
    SUBCASE("unit-scale fiber around zero") {
        PointSet a;
        a.add(CellFiber(PadicScalar::zero(5), CosetSpec{Q(5, "1"), 1, 1}, 0, std::nullopt));
        CHECK(a.distance_to(Q(5, "1/5")) == Norm::p_power(1));
        CHECK(a.distance_to(Q(5, "1")) == Norm::zero());
    }
    SUBCASE("singleton") {
        PointSet a;
        a.add(Q(3, "0"));
        CHECK(a.distance_to(Q(3, "9")) == Norm::p_power(-2));
    }
    SUBCASE("two residue balls") {
        PointSet a;
        a.add(Ball(1, PadicScalar::zero(3), cls(3, 2, 1)));
        a.add(Ball(1, PadicScalar::zero(3), cls(3, 2, 2)));
        CHECK(a.distance_to(Q(3, "6")) == Norm::zero());  // 6/3 = 2
        CHECK(a.contains(Q(3, "6")));
        CHECK(a.distance_to(Q(3, "1")) == Norm::one());
    }
}

TEST_CASE("set distance is zero exactly on members") {
    PointSet a;
    a.add(Ball(1, PadicScalar::zero(3), cls(3, 2, 1)));
    a.add(Q(3, "7"));
    for (int64_t k = -40; k <= 40; ++k) {
        PadicScalar x = PadicScalar::from_int(3, Zint(k));
        CAPTURE(k);
        CHECK(a.contains(x) == (a.distance_to(x) == Norm::zero()));
    }
}

TEST_CASE("set nearest point") {
    PointSet a;
    a.add(Q(3, "7"));
    a.add(Ball(1, PadicScalar::zero(3), cls(3, 2, 1)));

    // a member is its own nearest point
    CHECK(a.nearest_point(Q(3, "30")) == Q(3, "30"));
    // 9 is at distance 3^-2 from the ball (via 3+...), 3^-2 from 7? no:
    // |9-7| = |2| = 1, ball distance = |9-3| touches order 2 -> closer
    CHECK(a.nearest_point(Q(3, "9")) == Q(3, "3"));
    // ties go to the earlier constituent: 1 is at distance 1 from both
    CHECK(a.nearest_point(Q(3, "1")) == Q(3, "7"));

    PointSet empty;
    CHECK_THROWS_AS(empty.distance_to(Q(3, "1")), EmptyDomain);
}

TEST_CASE("set distance with fuzzy points") {
    PointSet a;
    a.add(Q(3, "0"));
    PadicScalar nz = PadicScalar::approx_zero(3, 4);
    CHECK_THROWS_AS(a.distance_to(nz), InsufficientPrecision);
}

TEST_CASE("distance to a set satisfies the ultrametric triangle inequality") {
    PointSet a;
    a.add(Ball(1, PadicScalar::zero(3), cls(3, 2, 1)));
    a.add(CellFiber(Q(3, "1"), CosetSpec{Q(3, "1"), 1, 1}, 0, 3));
    std::vector<PadicScalar> pts;
    for (int64_t k = -12; k <= 12; ++k)
        pts.push_back(PadicScalar::from_ratio(3, Zint(k), Zint(3)));
    for (const auto& x : pts)
        for (const auto& y : pts) {
            Norm lhs = a.distance_to(x);
            Norm rhs = max((x - y).norm(), a.distance_to(y));
            CHECK(lhs <= rhs);
        }
}
