#include <cmath>

#include "doctest.h"
#include "faceperc/measure.hpp"

using namespace faceperc;

namespace {

PlanarTessellation make(Model model, double t, std::uint64_t seed, LatticeCode code = LatticeCode::square_4444) {
    GeneratorConfig cfg;
    cfg.model = model;
    cfg.lattice_code = code;
    cfg.region = Window::centered_square(t);
    cfg.seed = seed;
    return build_tessellation(cfg);
}

}  // namespace

TEST_CASE("full and empty colourings") {
    const auto t = make(Model::voronoi, 100.0, 3);
    const Window w = Window::rectangle(-3, -2, 4, 3);
    const auto all = color(t, 2, 1.0, 1);
    const auto in = volumes_black_interior(t, all, w);
    CHECK(in[0] == doctest::Approx(1.0));
    CHECK(in[1] == doctest::Approx(-12.0));
    CHECK(in[2] == doctest::Approx(35.0));
    const auto cl = volumes_black_closed(t, all, w);
    CHECK(cl[0] == doctest::Approx(1.0));
    CHECK(cl[1] == doctest::Approx(12.0));
    CHECK(cl[2] == doctest::Approx(35.0));

    const auto none = color(t, 0, 0.0, 1);
    for (double v : volumes_black_closed(t, none, w)) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("a single black lattice cell") {
    const auto t = make(Model::archimedean, 100.0, 1);
    std::vector<std::uint8_t> bits(t.count(2), 0);
    const FaceRef cell = face_of_point(t, {0.0, 0.0});
    REQUIRE(cell.dim == 2);
    bits[cell.index] = 1;
    const auto c = coloring_from_bits(t, 2, bits, 0.5, 0);
    const auto box = t.box(cell);

    const Window big = Window::rectangle(box[0] - 0.5, box[1] - 0.5, box[2] + 0.5, box[3] + 0.5);
    const auto inside = volumes_black_closed(t, c, big);
    CHECK(inside[0] == doctest::Approx(1.0));
    CHECK(inside[1] == doctest::Approx(2.0));
    CHECK(inside[2] == doctest::Approx(1.0));
    CHECK(volumes_black_boundary(t, c, big)[0] == doctest::Approx(0.0));

    // Window cutting the cell in half: closed piece is a 1 x 0.5 rectangle.
    const double ym = 0.5 * (box[1] + box[3]);
    const Window half = Window::rectangle(box[0] - 0.5, box[1] - 0.5, box[2] + 0.5, ym);
    const auto cl = volumes_black_closed(t, c, half);
    CHECK(cl[0] == doctest::Approx(1.0));
    CHECK(cl[1] == doctest::Approx(1.5));
    CHECK(cl[2] == doctest::Approx(0.5));
    const auto in = volumes_black_interior(t, c, half);
    CHECK(in[0] == doctest::Approx(0.0));
    CHECK(in[1] == doctest::Approx(0.5));
    CHECK(in[2] == doctest::Approx(0.5));
}

TEST_CASE("interior Euler characteristic matches the combinatorial oracle") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Model model = seed % 3 == 0 ? Model::line : Model::voronoi;
        const auto t = make(model, 100.0, seed);
        const Window w = Window::centered_square(49.0);
        for (int n = 0; n < 3; ++n) {
            const auto c = color(t, n, 0.3 + 0.1 * n, seed * 7 + n);
            const double chi = volumes_black_interior(t, c, w)[0];
            CHECK(std::abs(chi - static_cast<double>(euler_oracle_combinatorial(t, c, w))) < 1e-9);
        }
    }
}

TEST_CASE("complement duality per sample") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto t = seed % 2 ? make(Model::voronoi, 100.0, seed)
                                : make(Model::archimedean, 100.0, seed, LatticeCode::honeycomb_666);
        const Window w = Window::centered_square(64.0);
        const auto c = color(t, 2, 0.45, seed);
        const auto wc = complement_coloring(t, c);
        const auto in = volumes_black_interior(t, c, w);
        const auto cl = volumes_black_closed(t, wc, w);
        const auto vw = intrinsic_volumes(w.polygon);
        for (int i = 0; i < 3; ++i) {
            const double sign = i % 2 ? -1.0 : 1.0;
            CHECK(std::abs(cl[i] - (vw[i] - sign * in[i])) < 1e-9);
        }
    }
}

TEST_CASE("area term equals the clipped black area") {
    const auto t = make(Model::voronoi, 100.0, 12);
    const Window w = Window::rectangle(-4.1, -3.3, 3.7, 2.9);
    const auto c = color(t, 2, 0.5, 8);
    double area = 0.0;
    for (std::size_t k = 0; k < t.count(2); ++k) {
        if (c.black[2][k]) {
            const auto piece = clip_polygon(t.geometry({2, static_cast<int>(k)}), w);
            area += piece ? intrinsic_volumes(*piece).v2 : 0.0;
        }
    }
    CHECK(volumes_black_interior(t, c, w)[2] == doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("monotone in the colouring") {
    const auto t = make(Model::voronoi, 100.0, 21);
    const Window w = Window::centered_square(36.0);
    double last = -1.0;
    for (double p = 0.0; p <= 1.0; p += 0.1) {
        const double a = volumes_black_closed(t, color(t, 2, p, 4), w)[2];
        CHECK(a >= last - 1e-12);
        last = a;
    }
}

TEST_CASE("steiner sums") {
    const auto t = make(Model::voronoi, 400.0, 5);
    const Window w = Window::centered_square(100.0);
    const auto all = color(t, 2, 1.0, 1);
    const auto s = volumes_black_steiner(t, all, w);
    // V_2 sum is the area of cells with Steiner point in W, close to area(W).
    CHECK(std::abs(s[2] - 100.0) < 15.0);
    // Euler sum counts #vertices - #edges + #cells with Steiner point in W.
    const auto sums = face_sums_clipped(t, w);
    CHECK(sums[2][2] == doctest::Approx(100.0));
    CHECK(std::abs(s[0]) < 10.0);
}

TEST_CASE("boundary term is lower order") {
    const auto t = make(Model::voronoi, 1600.0, 31);
    const auto c = color(t, 2, 0.5, 2);
    double prev = 1e300;
    for (double side : {5.0, 10.0, 20.0, 39.0}) {
        const Window w = Window::centered_square(side * side);
        const auto bd = volumes_black_boundary(t, c, w);
        const double rel = std::abs(bd[1]) / (side * side);
        CHECK(rel < prev);
        prev = rel;
    }
}

TEST_CASE("window genericity") {
    const auto t = make(Model::archimedean, 100.0, 2);
    const Point2 v = t.vertices()[0];
    const Window w = Window::rectangle(v.x, v.y - 3.3, v.x + 3.1, v.y + 2.2);
    CHECK_FALSE(window_is_generic(t, w));
    const Window g = generic_window(t, w);
    CHECK(window_is_generic(t, g));
    CHECK(distance(g.polygon.vertices()[0], w.polygon.vertices()[0]) < 1e-5);
    CHECK_THROWS_AS(volumes_black_interior(t, color(t, 2, 0.5, 1), Window::centered_square(400.0)), MeasureError);
}

TEST_CASE("raster oracle agrees on small windows") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto t = make(Model::voronoi, 64.0, seed);
        const Window w = Window::rectangle(-1.5, -1.5, 1.5, 1.5);
        const auto c = color(t, 2, 0.5, seed);
        try {
            const auto r = euler_oracle_raster(t, c, w);
            CHECK(static_cast<double>(r.euler) == doctest::Approx(volumes_black_closed(t, c, w)[0]));
            ++checked;
        } catch (const MeasureError&) {
        }
    }
    CHECK(checked >= 6);
    const auto t = make(Model::archimedean, 64.0, 3);
    CHECK_THROWS_AS(euler_oracle_raster(t, color(t, 0, 0.5, 1), Window::centered_square(4.0)), MeasureError);
}

TEST_CASE("raster oracle on diagonal lattice cells") {
    const auto t = make(Model::archimedean, 100.0, 5);
    const FaceRef a = face_of_point(t, {0.0, 0.0});
    const auto box = t.box(a);
    const FaceRef b = face_of_point(t, {0.5 * (box[0] + box[2]) + 1.0, 0.5 * (box[1] + box[3]) + 1.0});
    std::vector<std::uint8_t> bits(t.count(2), 0);
    bits[a.index] = 1;
    const Window w = Window::rectangle(box[0] - 0.3, box[1] - 0.3, box[2] + 1.3, box[3] + 1.3);
    const auto one = coloring_from_bits(t, 2, bits, 0.5, 0);
    CHECK(euler_oracle_raster(t, one, w).euler == 1);
    bits[b.index] = 1;
    const auto two = coloring_from_bits(t, 2, bits, 0.5, 0);
    CHECK(euler_oracle_raster(t, two, w).euler == 1);
    CHECK(volumes_black_closed(t, two, w)[0] == doctest::Approx(1.0));
    CHECK(euler_oracle_combinatorial(t, two, w) == 1);

    std::vector<std::uint8_t> vbits(t.count(0), 0);
    vbits[face_of_point(t, t.vertices()[t.cells()[a.index].vertices[0]]).index] = 1;
    const auto vertex_only = coloring_from_bits(t, 0, vbits, 0.01, 0);
    CHECK(euler_oracle_combinatorial(t, vertex_only, w) == 1);
    CHECK(euler_oracle_combinatorial(t, color(t, 2, 0.0, 1), w) == 0);
}
