#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "faceperc/geom2d.hpp"

using namespace faceperc;

namespace {

std::vector<Point2> random_convex(std::mt19937_64& rng, Point2 center, double radius) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> count(3, 9);
    std::vector<double> a(count(rng));
    for (auto& x : a) {
        x = ang(rng);
    }
    std::sort(a.begin(), a.end());
    std::vector<Point2> v;
    for (double x : a) {
        v.push_back(center + radius * Point2{std::cos(x), std::sin(x)});
    }
    return v;
}

Point2 steiner_by_quadrature(const FaceGeometry& g, int nodes) {
    Point2 acc{0.0, 0.0};
    const double h = 2.0 * std::numbers::pi / nodes;
    for (int k = 0; k < nodes; ++k) {
        const double phi = (k + 0.5) * h;
        const Point2 u{std::cos(phi), std::sin(phi)};
        double support = -1e300;
        for (const auto& v : g.vertices()) {
            support = std::max(support, dot(v, u));
        }
        acc = acc + (support * h) * u;
    }
    return (1.0 / std::numbers::pi) * acc;
}

}  // namespace

TEST_CASE("intrinsic volumes of elementary faces") {
    const auto seg = intrinsic_volumes(FaceGeometry::segment({0, 0}, {1, 0}));
    CHECK(seg.v0 == 1.0);
    CHECK(seg.v1 == doctest::Approx(1.0));
    CHECK(seg.v2 == 0.0);

    const auto sq = intrinsic_volumes(FaceGeometry::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK(sq.v0 == 1.0);
    CHECK(sq.v1 == doctest::Approx(2.0));
    CHECK(sq.v2 == doctest::Approx(1.0));

    const auto tri = intrinsic_volumes(FaceGeometry::polygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}));
    CHECK(tri.v1 == doctest::Approx(1.5));
    CHECK(tri.v2 == doctest::Approx(std::sqrt(3.0) / 4));

    const auto pt = intrinsic_volumes(FaceGeometry::point({3, 4}));
    CHECK(pt.v0 == 1.0);
    CHECK(pt.v1 == 0.0);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(FaceGeometry::polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
    CHECK_THROWS_AS(FaceGeometry::polygon({{0, 0}, {1, 0}}), GeometryError);
    CHECK_THROWS_AS(FaceGeometry::segment({1, 1}, {1, 1}), GeometryError);
    CHECK_THROWS_AS(FaceGeometry::polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}), GeometryError);
    CHECK_THROWS_AS(FaceGeometry::point({std::nan(""), 0}), GeometryError);
}

TEST_CASE("clockwise input is stored counter-clockwise") {
    const auto g = FaceGeometry::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(polygon_signed_area(g.vertices()) > 0.0);
}

TEST_CASE("steiner point") {
    CHECK(steiner_point(FaceGeometry::segment({0, 0}, {2, 0})).x == doctest::Approx(1.0));
    CHECK(steiner_point(FaceGeometry::segment({0, 0}, {2, 0})).y == doctest::Approx(0.0));

    std::vector<Point2> hex;
    const Point2 c{3.0, -2.0};
    for (int k = 0; k < 6; ++k) {
        hex.push_back(c + Point2{std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3)});
    }
    const auto sh = steiner_point(FaceGeometry::polygon(hex));
    CHECK(sh.x == doctest::Approx(c.x));
    CHECK(sh.y == doctest::Approx(c.y));

    SUBCASE("matches the support-function integral") {
        const auto tri = FaceGeometry::polygon({{0, 0}, {4, 0}, {0, 2}});
        const Point2 exact = steiner_point(tri);
        const Point2 quad = steiner_by_quadrature(tri, 20000);
        CHECK(std::abs(exact.x - quad.x) < 1e-6);
        CHECK(std::abs(exact.y - quad.y) < 1e-6);

        std::mt19937_64 rng(11);
        for (int rep = 0; rep < 20; ++rep) {
            const auto g = FaceGeometry::polygon(random_convex(rng, {0.3, -0.7}, 2.0));
            const Point2 s = steiner_point(g);
            const Point2 q = steiner_by_quadrature(g, 20000);
            CHECK(distance(s, q) < 1e-6);
        }
    }

    SUBCASE("translation covariance and relative interior") {
        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 50; ++rep) {
            const auto g = FaceGeometry::polygon(random_convex(rng, {0, 0}, 1.0));
            const Point2 x{1.7, -4.2};
            const Point2 a = steiner_point(g.translated(x));
            const Point2 b = steiner_point(g) + x;
            CHECK(distance(a, b) < 1e-12);
            CHECK(point_in_convex(steiner_point(g), g.vertices(), -1e-12));
        }
    }
}

TEST_CASE("polygon clipping") {
    const Window unit = Window::rectangle(0, 0, 1, 1);
    const auto same = clip_polygon(unit.polygon, unit);
    REQUIRE(same);
    CHECK(intrinsic_volumes(*same).v2 == doctest::Approx(1.0));

    const auto tri = clip_polygon(FaceGeometry::polygon({{0, 0}, {2, 0}, {2, 2}}), unit);
    REQUIRE(tri);
    CHECK(tri->size() == 3);
    CHECK(intrinsic_volumes(*tri).v2 == doctest::Approx(0.5));

    CHECK_FALSE(clip_polygon(FaceGeometry::polygon({{2, 2}, {3, 2}, {3, 3}}), unit));

    SUBCASE("area agrees with point sampling") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (int rep = 0; rep < 10; ++rep) {
            const auto a = FaceGeometry::polygon(random_convex(rng, {u(rng) * 0.3, u(rng) * 0.3}, 1.0));
            const auto b = FaceGeometry::polygon(random_convex(rng, {u(rng) * 0.3, u(rng) * 0.3}, 1.0));
            const auto cut = clip_polygon(a, Window{b, 1.0});
            const double area = cut ? intrinsic_volumes(*cut).v2 : 0.0;
            const int n = 200000;
            int hits = 0;
            for (int k = 0; k < n; ++k) {
                const Point2 x{u(rng), u(rng)};
                hits += point_in_convex(x, a.vertices()) && point_in_convex(x, b.vertices());
            }
            const double box = 9.0;
            const double frac = static_cast<double>(hits) / n;
            const double se = box * std::sqrt(frac * (1 - frac) / n);
            CHECK(std::abs(area - box * frac) <= 3.0 * se + 1e-12);
            CHECK(area <= std::min(intrinsic_volumes(a).v2, intrinsic_volumes(b).v2) + 1e-12);
        }
    }

    SUBCASE("idempotence") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 50; ++rep) {
            const auto a = FaceGeometry::polygon(random_convex(rng, {0.5, 0.5}, 0.9));
            const auto once = clip_polygon(a, unit);
            if (!once) {
                continue;
            }
            const auto twice = clip_polygon(*once, unit);
            REQUIRE(twice);
            const auto v1 = intrinsic_volumes(*once);
            const auto v2 = intrinsic_volumes(*twice);
            CHECK(v1.v1 == doctest::Approx(v2.v1).epsilon(1e-12));
            CHECK(v1.v2 == doctest::Approx(v2.v2).epsilon(1e-12));
        }
    }
}

TEST_CASE("segment clipping") {
    const Window unit = Window::rectangle(0, 0, 1, 1);
    const auto inside = clip_segment(FaceGeometry::segment({0.2, 0.2}, {0.8, 0.3}), unit);
    REQUIRE(inside.piece);
    CHECK(inside.boundary_hits == 0);
    CHECK(inside.piece->vertices()[0] == Point2{0.2, 0.2});

    const auto cross_cut = clip_segment(FaceGeometry::segment({-1, 0.5}, {2, 0.5}), unit);
    REQUIRE(cross_cut.piece);
    CHECK(cross_cut.boundary_hits == 2);
    CHECK(cross_cut.piece->vertices()[0].x == doctest::Approx(0.0));
    CHECK(cross_cut.piece->vertices()[1].x == doctest::Approx(1.0));

    const auto outside = clip_segment(FaceGeometry::segment({2, 2}, {3, 3}), unit);
    CHECK_FALSE(outside.piece);
    CHECK(outside.boundary_hits == 0);
}

TEST_CASE("additivity along a chord") {
    const auto whole = FaceGeometry::polygon({{0, 0}, {3, 0}, {4, 2}, {1, 3}, {-1, 1}});
    // chord from vertex (0,0) to vertex (4,2)
    const auto a = FaceGeometry::polygon({{0, 0}, {3, 0}, {4, 2}});
    const auto b = FaceGeometry::polygon({{0, 0}, {4, 2}, {1, 3}, {-1, 1}});
    const auto e = FaceGeometry::segment({0, 0}, {4, 2});
    const auto vw = intrinsic_volumes(whole);
    const auto va = intrinsic_volumes(a);
    const auto vb = intrinsic_volumes(b);
    const auto ve = intrinsic_volumes(e);
    for (int i = 0; i < 3; ++i) {
        CHECK(va[i] + vb[i] - ve[i] == doctest::Approx(vw[i]));
    }
}

TEST_CASE("homogeneity") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = FaceGeometry::polygon(random_convex(rng, {0.1, 0.2}, 1.3));
        const double s = 0.3 + rep * 0.2;
        const auto v = intrinsic_volumes(g);
        const auto w = intrinsic_volumes(g.scaled(s));
        CHECK(w.v0 == doctest::Approx(v.v0));
        CHECK(w.v1 == doctest::Approx(s * v.v1));
        CHECK(w.v2 == doctest::Approx(s * s * v.v2));
    }
}

TEST_CASE("separating-axis predicates") {
    const std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(segment_intersects_convex({-1, 0.5}, {0.5, 0.5}, sq));
    CHECK_FALSE(segment_intersects_convex({-1, 2}, {2, 1.5}, sq));
    CHECK(segment_intersects_convex({1, 1}, {2, 2}, sq));
    CHECK(convex_intersects(sq, {{1, 1}, {2, 1}, {2, 2}}));
    CHECK_FALSE(convex_intersects(sq, {{1.1, 0}, {2, 0}, {2, 1}}));
    CHECK(point_in_convex({1, 0.5}, sq));
    CHECK_FALSE(point_in_convex({1.01, 0.5}, sq));
}

TEST_CASE("windows") {
    const Window w = Window::centered_square(400.0);
    CHECK(w.area() == doctest::Approx(400.0));
    CHECK(w.bounds()[0] == doctest::Approx(-10.0));
    CHECK(w.contains({0, 0}));
    CHECK_THROWS_AS(Window::centered_square(0.0), GeometryError);
    const Window tri = Window::scaled(FaceGeometry::polygon({{0, 0}, {1, 0}, {0, 2}}), 4.0);
    CHECK(tri.area() == doctest::Approx(4.0));
}
