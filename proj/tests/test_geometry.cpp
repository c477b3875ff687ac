#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "packperc/geometry.hpp"
#include "packperc/io.hpp"

using namespace packperc;

TEST_CASE("diameter closed forms") {
    CHECK(diameter(Box{{0, 0}, {1, 1}}) == 1.0);
    CHECK(diameter(Disk{{3, -1}, 1.0}) == 2.0);
    CHECK(diameter(Ellipse{{0, 0}, 2.0, 1.0, 0.0}) == 4.0);

    // oracle: dense boundary sampling
    CHECK(oracle::diameter_sampled(Disk{{3, -1}, 1.0}) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(oracle::diameter_sampled(Ellipse{{0, 0}, 2.0, 1.0, 0.0}) ==
          doctest::Approx(4.0).epsilon(1e-4));
    const Ellipse tilted{{1, 2}, 2.0, 0.5, 0.7};
    CHECK(diameter(tilted) == doctest::Approx(oracle::diameter_sampled(tilted)).epsilon(1e-4));
}

TEST_CASE("set_distance examples and oracle") {
    const Disk a{{0, 0}, 1.0}, b{{2, 0}, 1.0};
    CHECK(set_distance(a, b) == 0.0);  // tangent
    CHECK(set_distance(Disk{{0, 0}, 1.0}, Disk{{4, 0}, 1.0}) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(set_distance(a, a) == 0.0);

    // diagonal separation exercises the corner regime
    const Disk c{{3, 3}, 1.0};
    CHECK(set_distance(a, c) ==
          doctest::Approx(oracle::set_distance_sampled(a, c)).epsilon(1e-3));

    const Box bx{{5, -1}, {1, 2}};
    CHECK(set_distance(a, bx) == doctest::Approx(oracle::set_distance_sampled(a, bx)).epsilon(1e-3));

    const Ellipse e1{{0, 0}, 2.0, 0.5, 0.3};
    const Ellipse e2{{5, 1}, 1.5, 0.4, 1.2};
    CHECK(set_distance(e1, e2) ==
          doctest::Approx(oracle::set_distance_sampled(e1, e2, 2048)).epsilon(2e-3));

    CHECK_THROWS(set_distance(Box{{0, 0, 0}, {1, 1, 1}}, bx));  // dimension mismatch
}

TEST_CASE("set_distance symmetry, scaling, intersection-zero") {
    const std::vector<Shape> shapes = {Disk{{0.3, -0.2}, 0.8}, Box{{2.0, 0.1}, {1.0, 0.4}},
                                       Ellipse{{-1.5, 1.0}, 1.2, 0.6, 0.9}};
    for (const auto& s0 : shapes) {
        for (const auto& s1 : shapes) {
            const double d01 = set_distance(s0, s1), d10 = set_distance(s1, s0);
            CHECK(d01 == doctest::Approx(d10).epsilon(1e-8));
            CHECK(d01 >= 0.0);
            for (double f : {0.5, 2.0, 10.0}) {
                CHECK(set_distance(scaled(s0, f), scaled(s1, f)) ==
                      doctest::Approx(f * d01).epsilon(1e-6));
                CHECK(diameter(scaled(s0, f)) == doctest::Approx(f * diameter(s0)).epsilon(1e-12));
            }
        }
    }
    // distance zero iff the shapes intersect
    CHECK(set_distance(shapes[0], Ellipse{{0.5, 0.0}, 1.0, 0.2, 0.1}) == 0.0);
}

TEST_CASE("validate_packing reports only real overlaps") {
    Packing p;
    p.shapes = {Disk{{0, 0}, 1.0}, Disk{{4, 0}, 1.0}};
    CHECK(validate_packing(p).ok());

    p.shapes = {Disk{{0, 0}, 1.0}, Disk{{1, 0}, 1.0}};
    const auto report = validate_packing(p);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].i == 0);
    CHECK(report.violations[0].j == 1);
    CHECK(report.violations[0].depth == doctest::Approx(1.0));

    p.shapes = {Disk{{0, 0}, 1.0}, Disk{{2, 0}, 1.0}};  // tangent
    CHECK(validate_packing(p).ok());

    // four unit squares sharing a corner: zero-measure contacts are fine
    p.shapes = {Box{{0, 0}, {1, 1}}, Box{{1, 0}, {1, 1}}, Box{{0, 1}, {1, 1}}, Box{{1, 1}, {1, 1}}};
    CHECK(validate_packing(p).ok());

    // overlapping ellipses are caught through the generic penetration path
    p.shapes = {Ellipse{{0, 0}, 1.0, 0.5, 0.2}, Ellipse{{0.5, 0}, 1.0, 0.5, 1.0}};
    CHECK_FALSE(validate_packing(p).ok());
}

TEST_CASE("regularity closed forms vs sampled area") {
    Packing squares;
    squares.shapes = {Box{{0, 0}, {1, 1}}, Box{{3, 0}, {2, 2}}};
    const auto r1 = regularity(squares);
    CHECK(r1.eps_inf == doctest::Approx(1.0));
    CHECK(r1.diam_sup == doctest::Approx(2.0));

    Packing disks;
    disks.shapes = {Disk{{0, 0}, 1.0}, Disk{{3, 0}, 0.4}};
    CHECK(regularity(disks).eps_inf == doctest::Approx(M_PI / 4.0));

    Packing mixed;
    mixed.shapes = {Disk{{0, 0}, 1.0}, Ellipse{{4, 0}, 2.0, 1.0, 0.0}};
    const auto r2 = regularity(mixed);
    CHECK(r2.eps_inf == doctest::Approx(M_PI / 8.0));
    CHECK(r2.argmin == 1);

    // oracle: Monte Carlo area / diam^2
    const Shape e = Ellipse{{4, 0}, 2.0, 1.0, 0.0};
    const double vol = oracle::area_sampled(e);
    CHECK(vol / std::pow(diameter(e), 2) == doctest::Approx(M_PI / 8.0).epsilon(1e-2));

    // scale invariance of the ratio
    for (double f : {0.5, 2.0, 10.0}) {
        const auto rs = regularity(scaled(mixed, f));
        CHECK(rs.eps_inf == doctest::Approx(r2.eps_inf).epsilon(1e-12));
    }
}

TEST_CASE("mobius inversion formula, tangency, round trip") {
    Packing p;
    p.shapes = {Disk{{3, 0}, 1.0}};
    const auto inv = mobius_invert(p, {0, 0});
    const auto& img = std::get<Disk>(inv.shapes[0]);
    CHECK(img.center[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(img.center[1] == doctest::Approx(0.0));
    CHECK(img.radius == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

    // oracle: push boundary samples through z -> z/|z|^2 and fit a circle
    const auto pts = oracle::boundary_samples(p.shapes[0], 64);
    std::vector<Vec2> mapped;
    for (const auto& q : pts) {
        const double n2 = q[0] * q[0] + q[1] * q[1];
        mapped.push_back({q[0] / n2, q[1] / n2});
    }
    Vec2 c;
    double r;
    oracle::circumcircle(mapped[0], mapped[21], mapped[43], c, r);
    CHECK(c[0] == doctest::Approx(img.center[0]).epsilon(1e-9));
    CHECK(r == doctest::Approx(img.radius).epsilon(1e-9));
    for (const auto& q : mapped)
        CHECK(std::hypot(q[0] - c[0], q[1] - c[1]) == doctest::Approx(r).epsilon(1e-9));

    // tangency preserved
    Packing pair;
    pair.shapes = {Disk{{3, 0}, 1.0}, Disk{{5, 0}, 1.0}};
    const auto ipair = mobius_invert(pair, {0, 0});
    const auto& d0 = std::get<Disk>(ipair.shapes[0]);
    const auto& d1 = std::get<Disk>(ipair.shapes[1]);
    CHECK(std::hypot(d0.center[0] - d1.center[0], d0.center[1] - d1.center[1]) ==
          doctest::Approx(d0.radius + d1.radius).epsilon(1e-9));

    // double inversion restores the packing
    const auto back = mobius_invert(ipair, {0, 0});
    for (size_t i = 0; i < pair.shapes.size(); ++i) {
        const auto& orig = std::get<Disk>(pair.shapes[i]);
        const auto& twice = std::get<Disk>(back.shapes[i]);
        CHECK(twice.center[0] == doctest::Approx(orig.center[0]).epsilon(1e-9));
        CHECK(twice.radius == doctest::Approx(orig.radius).epsilon(1e-9));
    }

    CHECK_THROWS(mobius_invert(p, {2, 0}));  // on the boundary
    CHECK_THROWS(mobius_invert(p, {3, 0}));  // inside
}

TEST_CASE("packing json round trip") {
    Packing p;
    p.dimension = 2;
    p.shapes = {Disk{{0.1234567890123, -7.25}, 0.3333333333333333},
                Box{{0.0, 1e-9}, {2.5, 0.125}}, Ellipse{{-2.0, 3.0}, 1.75, 0.6, 0.31234}};
    const std::string text = packing_to_string(p);
    const Packing q = packing_from_string(text);
    REQUIRE(q.shapes.size() == p.shapes.size());
    CHECK(packing_to_string(q) == text);  // stable to full precision
    const auto& d = std::get<Disk>(q.shapes[0]);
    CHECK(d.center[0] == 0.1234567890123);
    CHECK(d.radius == 0.3333333333333333);
}
