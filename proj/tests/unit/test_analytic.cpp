#include <cmath>
#include <numbers>

#include "doctest.h"
#include "faceperc/analytic.hpp"

using namespace faceperc;

namespace {

// Dense polynomial arithmetic for independent re-expansion.
struct Poly {
    std::vector<double> c;

    Poly(std::initializer_list<double> v) : c(v) {}
    explicit Poly(std::vector<double> v) : c(std::move(v)) {}

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<double> r(std::max(a.c.size(), b.c.size()), 0.0);
        for (std::size_t k = 0; k < a.c.size(); ++k) r[k] += a.c[k];
        for (std::size_t k = 0; k < b.c.size(); ++k) r[k] += b.c[k];
        return Poly(r);
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        std::vector<double> r(a.c.size() + b.c.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return Poly(r);
    }
    friend Poly operator*(double s, const Poly& a) {
        Poly r = a;
        for (auto& x : r.c) x *= s;
        return r;
    }
};

const Poly P{0.0, 1.0};
const Poly Q{1.0, -1.0};

Poly pw(const Poly& a, int e) {
    Poly r{1.0};
    for (int k = 0; k < e; ++k) r = r * a;
    return r;
}

std::vector<double> grid(int n = 1001) {
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) g[k] = static_cast<double>(k) / (n - 1);
    return g;
}

PlanarCovInputs sample_inputs() {
    PlanarCovInputs in;
    in.gamma2 = 0.8;
    in.gamma1 = 3.0 * in.gamma2;
    in.tau11 = 0.37;
    in.tau10 = -0.21;
    in.tau00 = 0.9;
    in.mu2 = 37.78;
    in.e2_v2sq = 1.0 / (in.gamma2 * in.gamma2) * 1.28;
    in.e2_v2v1 = 2.1;
    in.e2_v2f0 = 7.6;
    in.e1_v1sq = 0.41;
    in.e2_v1sq = 5.3;
    in.e2_v1f0 = 14.2;
    in.e2_v1 = 2.2;
    return in;
}

}  // namespace

TEST_CASE("f and g polynomials") {
    CHECK(f_poly(1, 2, 1, 0.3) == doctest::Approx(0.3));
    CHECK(f_poly(2, 0, 1, 0.3) == doctest::Approx(0.3));
    CHECK(f_poly(0, 1, 5, 1.0) == 1.0);
    CHECK_THROWS_AS(f_poly(1, 1, 0, 0.5), AnalyticError);
    const double p = 0.37;
    CHECK(g_poly(1, 2, 1, 2, 3, 4, p) == doctest::Approx(std::pow(p, 5) * (1 - p * p)));
    CHECK(g_poly(2, 1, 0, 2, 3, 2, p) == doctest::Approx(std::pow(1 - p, 3) * p * p));
    CHECK(g_poly(2, 1, 2, 0, 3, 2, p) == doctest::Approx(std::pow(p, 3) * (1 - p) * (1 - p)));
    CHECK(g_poly(2, 2, 0, 1, 3, 2, p) == doctest::Approx(std::pow(1 - p, 3) * (1 - std::pow(1 - p, 2))));
    for (int n = 0; n < 3; ++n)
        for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
                CHECK(g_poly(n, 1, k, l, 2, 3, 0.0) == 0.0);
                CHECK(g_poly(n, 1, k, l, 2, 3, 1.0) == 0.0);
            }
    CHECK_THROWS_AS(g_poly(2, 3, 0, 0, 2, 4, 0.5), AnalyticError);
}

TEST_CASE("general density formula") {
    SUBCASE("area density in cell mode is p") {
        DensityInput inp;
        inp.n = 2;
        inp.a.assign(3, std::vector<std::vector<double>>(3, std::vector<double>(2, 0.0)));
        inp.a[2][2][1] = 1.0;
        for (double p : {0.0, 0.2, 0.9}) CHECK(density_formula_general(inp, 2, p) == doctest::Approx(p));
    }
    SUBCASE("square lattice vertex mode") {
        const auto inp = archimedean_density_input(LatticeCode::square_4444, 0, 1.0);
        CHECK(density_formula_general(inp, 0, 0.5) == doctest::Approx(0.0625).epsilon(1e-14));
        for (double p : grid(101)) {
            CHECK(density_formula_general(inp, 0, p) == doctest::Approx(p - 2 * p * p + std::pow(p, 4)));
        }
    }
    SUBCASE("zero at p = 0") {
        for (int n = 0; n < 3; ++n) {
            CHECK(density_formula_general(archimedean_density_input(LatticeCode::kagome_3636, n, 1.3), 0, 0.0) ==
                  0.0);
        }
    }
    SUBCASE("tail mass is enforced") {
        auto inp = archimedean_density_input(LatticeCode::square_4444, 2, 1.0);
        inp.tail_mass = 1e-3;
        CHECK_THROWS_AS(density_formula_general(inp, 0, 0.5), AnalyticError);
    }
}

TEST_CASE("archimedean lattices: three code paths") {
    const LatticeCode codes[] = {LatticeCode::square_4444, LatticeCode::triangular_333333,
                                 LatticeCode::honeycomb_666, LatticeCode::kagome_3636};
    for (auto code : codes) {
        const auto& info = lattice_info(code);
        const double g0 = 0.7;
        const double g2 = g0 * (info.z - 2) / 2.0;
        const auto dist = archimedean_star_distributions(code);
        for (int n = 0; n < 3; ++n) {
            const auto inp = archimedean_density_input(code, n, g0);
            for (double p : grid()) {
                const double a = archimedean_mean_euler(code, n, g0, p);
                CHECK(std::abs(a - density_formula_general(inp, 0, p)) < 1e-12);
                CHECK(std::abs(a - planar_mean_euler(n, g0, g2, dist, p)) < 1e-12);
            }
            CHECK(archimedean_mean_euler(code, n, g0, 0.0) == doctest::Approx(0.0));
            CHECK(std::abs(archimedean_mean_euler(code, n, g0, 1.0)) < 1e-12);
        }
    }
    CHECK(archimedean_mean_euler(LatticeCode::square_4444, 0, 1.0, 0.5) == doctest::Approx(0.0625));
}

TEST_CASE("honeycomb cell mode is the normal closed form") {
    const double g2 = 0.45;
    for (double p : grid()) {
        const double normal = density_cell_normal(2, 0, {2 * g2, 3 * g2, g2}, p);
        CHECK(std::abs(archimedean_mean_euler(LatticeCode::honeycomb_666, 2, 2 * g2, p) - normal) < 1e-12);
        CHECK(std::abs(normal - g2 * p * (1 - p) * (1 - 2 * p)) < 1e-12);
    }
}

TEST_CASE("normal cell-mode density") {
    const double g = 1.7;
    for (double p : grid()) {
        CHECK(density_cell_normal(2, 2, {0, 0, 1.0}, p) == doctest::Approx(p));
        for (int i = 0; i < 2; ++i) {
            const std::vector<double> means = i == 0 ? std::vector<double>{2 * g, 3 * g, g}
                                                     : std::vector<double>{0.0, 1.3, 1.3};
            const double a = density_cell_normal(2, i, means, p);
            const double b = density_cell_normal(2, i, means, 1 - p);
            CHECK(std::abs(a * std::pow(-1.0, 2 + i + 1) - b) < 1e-12);
        }
    }
}

TEST_CASE("line tessellation mean Euler density") {
    PlanarStarDistributions dist;
    dist.p02[4] = 1.0;
    const double g2 = 0.6;
    for (double p : grid()) {
        CHECK(std::abs(planar_mean_euler(2, g2, g2, dist, p) - line_mean_euler(g2, p)) < 1e-12);
    }
    const double root = (3 - std::sqrt(5.0)) / 2;
    CHECK(std::abs(line_mean_euler(g2, root)) < 1e-15);
    CHECK(line_mean_euler(g2, root - 0.01) > 0);
    CHECK(line_mean_euler(g2, root + 0.01) < 0);
    CHECK_THROWS_AS(planar_mean_euler(3, 1, 1, dist, 0.5), AnalyticError);
    PlanarStarDistributions bad;
    bad.p02[4] = 0.5;
    CHECK_THROWS_AS(planar_mean_euler(2, 1, 1, bad, 0.5), AnalyticError);
}

TEST_CASE("intensity relations") {
    auto r = intensity_relations(3.0, 1.0);
    CHECK(r.gamma0 == doctest::Approx(2.0));
    CHECK(r.gamma1 == doctest::Approx(3.0));
    CHECK(r.n20 == doctest::Approx(6.0));
    r = intensity_relations(4.0, 1.0);
    CHECK(r.gamma0 == doctest::Approx(1.0));
    CHECK(r.gamma1 == doctest::Approx(2.0));
    CHECK(r.n20 == doctest::Approx(4.0));
    r = intensity_relations(6.0, 1.0);
    CHECK(r.gamma0 == doctest::Approx(0.5));
    CHECK(r.n20 == doctest::Approx(3.0));
    CHECK_THROWS_AS(intensity_relations(2.0, 1.0), AnalyticError);
}

TEST_CASE("covariance: three code paths coincide") {
    const auto in = sample_inputs();
    const auto tables = expand_planar_ingredients(in);
    const auto cross = cell_normal_cross(tables);
    const auto rho = cell_normal_rho(tables);
    const int pairs[6][2] = {{2, 2}, {1, 2}, {0, 2}, {1, 1}, {0, 1}, {0, 0}};
    for (const auto& ij : pairs) {
        for (int swap = 0; swap < 2; ++swap) {
            const int i = swap ? ij[1] : ij[0];
            const int j = swap ? ij[0] : ij[1];
            double worst = 0.0;
            for (double p : grid()) {
                const double a = covariance_planar_structure(in, i, j, p);
                const double b = covariance_cell_normal(tables, i, j, p);
                const double c = covariance_general(2, 2, cross, rho, i, j, p);
                worst = std::max({worst, std::abs(a - b), std::abs(a - c)});
            }
            INFO("pair " << i << j);
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("covariance duality and endpoints") {
    const auto in = sample_inputs();
    const auto tables = expand_planar_ingredients(in);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(covariance_cell_normal(tables, i, j, 0.0) == 0.0);
            CHECK(std::abs(covariance_cell_normal(tables, i, j, 1.0)) < 1e-12);
            for (double p : grid(101)) {
                const double a = covariance_planar_structure(in, i, j, p);
                const double b = covariance_planar_structure(in, i, j, 1 - p);
                CHECK(std::abs(a - std::pow(-1.0, i + j) * b) < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(covariance_planar_structure(in, 3, 0, 0.5), AnalyticError);
    NormalCovTables empty;
    CHECK_THROWS_AS(covariance_cell_normal(empty, 0, 0, 0.5), AnalyticError);
    CHECK_THROWS_AS(covariance_general(2, 2, {}, cell_normal_rho(tables), 0, 0, 0.5), AnalyticError);
}

TEST_CASE("planar covariance special values") {
    auto in = sample_inputs();
    const double g2 = in.gamma2;

    SUBCASE("sigma_22 reduces to the area second moment") {
        for (double p : grid(11)) {
            CHECK(covariance_cell_normal(expand_planar_ingredients(in), 2, 2, p) ==
                  doctest::Approx(p * (1 - p) * g2 * in.e2_v2sq));
        }
    }
    SUBCASE("sigma_12 zeros and extrema") {
        CHECK(std::abs(covariance_planar_structure(in, 1, 2, 0.5)) < 1e-15);
        double best = -1e300, worst = 1e300, arg_best = 0, arg_worst = 0;
        for (double p : grid(100001)) {
            const double v = covariance_planar_structure(in, 1, 2, p);
            if (v > best) best = v, arg_best = p;
            if (v < worst) worst = v, arg_worst = p;
        }
        CHECK(arg_best == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-4));
        CHECK(arg_worst == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)).epsilon(1e-4));
    }
    SUBCASE("Poisson-Voronoi Euler variance") {
        in.tau00 = g2;
        for (double p : grid()) {
            CHECK(std::abs(pv_variance_euler(g2, in.mu2, p) - covariance_planar_structure(in, 0, 0, p)) < 1e-12);
            CHECK(std::abs(pv_variance_euler(g2, in.mu2, p) - pv_variance_euler(g2, in.mu2, 1 - p)) < 1e-12);
        }
        CHECK(pv_variance_euler(g2, 37.78, 0.5) == doctest::Approx(g2 * (37.78 - 30) / 64));
        CHECK(pv_variance_euler(1.0, 37.78, 0.5) == doctest::Approx(0.1216).epsilon(1e-3));
        double best = -1e300, arg = 0;
        for (double p : grid(100001)) {
            const double v = pv_variance_euler(g2, 37.78, p);
            if (v > best) best = v, arg = p;
        }
        CHECK(arg == doctest::Approx(0.5));
        CHECK(37.78 > sigma00_max_threshold(g2, g2));
        CHECK(sigma00_max_threshold(1.0, 1.0) == doctest::Approx(30.0));
        CHECK(pv_variance_euler(g2, in.mu2, 0.0) == 0.0);
        CHECK(pv_variance_euler(g2, in.mu2, 1.0) == 0.0);
    }
    SUBCASE("strict maximum criterion") {
        // Below the threshold, 1/2 is a local minimum of sigma_00.
        in.tau00 = 2.0 * g2;
        const double thr = sigma00_max_threshold(g2, in.tau00);
        for (double mu : {thr - 1.0, thr + 1.0}) {
            in.mu2 = mu;
            const double mid = covariance_planar_structure(in, 0, 0, 0.5);
            const double off = covariance_planar_structure(in, 0, 0, 0.5 + 1e-3);
            CHECK((mid > off) == (mu > thr));
        }
    }
}

TEST_CASE("Horner re-expansion of the closed forms") {
    const auto in = sample_inputs();
    const double g2 = in.gamma2;
    const Poly pq = P * Q;
    const Poly s22 = (g2 * in.e2_v2sq) * pq;
    const Poly s12 = (g2 * in.e2_v2v1) * (pq * Poly{1, -2});
    const Poly s02 = pq + (-g2 * in.e2_v2f0) * (pq * pq);
    const Poly s11 = (in.tau11 + in.gamma1 * in.e1_v1sq) * (pq * pq) +
                     (g2 * in.e2_v1sq) * (pq * pw(Poly{1, -2}, 2));
    const Poly s01 = (in.tau10 - g2 * in.e2_v1f0) * (pq * pq * Poly{1, -2}) +
                     (g2 * in.e2_v1) * (pq * Poly{1, -1, -3, 2});
    const Poly s00 = (g2 * in.mu2) * pw(pq, 3) + g2 * (pq * Poly{1, -9, -1, 20, -10}) +
                     in.tau00 * (pq * pq * pw(Poly{1, -2}, 2));
    const Poly pv = (g2 * in.mu2) * pw(pq, 3) + g2 * (pq * Poly{1, -8, -6, 28, -14});
    const Poly line = g2 * (pq * Poly{1, -3, 1});
    const Poly normal0 = g2 * (pq * Poly{1, -2});
    const Poly sq_vertex{0, 1, -2, 0, 1};
    const struct {
        int i, j;
        const Poly* poly;
    } cov[] = {{2, 2, &s22}, {1, 2, &s12}, {0, 2, &s02}, {1, 1, &s11}, {0, 1, &s01}, {0, 0, &s00}};
    for (double p : grid()) {
        for (const auto& c : cov) {
            CHECK(std::abs(covariance_planar_structure(in, c.i, c.j, p) - horner(c.poly->c, p)) < 1e-12);
        }
        CHECK(std::abs(pv_variance_euler(g2, in.mu2, p) - horner(pv.c, p)) < 1e-12);
        CHECK(std::abs(line_mean_euler(g2, p) - horner(line.c, p)) < 1e-12);
        CHECK(std::abs(density_cell_normal(2, 0, {2 * g2, 3 * g2, g2}, p) - horner(normal0.c, p)) < 1e-12);
        CHECK(std::abs(archimedean_mean_euler(LatticeCode::square_4444, 0, 1.0, p) - horner(sq_vertex.c, p)) <
              1e-12);
    }
}

TEST_CASE("archimedean vertex intensities") {
    CHECK(archimedean_vertex_intensity(LatticeCode::square_4444) == doctest::Approx(1.0));
    CHECK(archimedean_vertex_intensity(LatticeCode::triangular_333333) == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(archimedean_vertex_intensity(LatticeCode::honeycomb_666, 2.0) == doctest::Approx(1.0 / (3.0 * std::sqrt(3.0))));
    CHECK(archimedean_vertex_intensity(LatticeCode::kagome_3636) == doctest::Approx(std::sqrt(3.0) / 2.0));
}
