#include "faceperc/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace faceperc {

namespace {

double ipow(double x, int e) {
    double r = 1.0;
    for (int k = 0; k < e; ++k) {
        r *= x;
    }
    return r;
}

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw AnalyticError("p must lie in [0, 1]");
    }
}

double sign(int e) { return e % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

double f_poly(int n, int k, int r, double p) {
    if (r < 1) {
        throw AnalyticError("f_poly needs r >= 1");
    }
    return k < n ? 1.0 - ipow(1.0 - p, r) : ipow(p, r);
}

double g_poly(int n, int m, int k, int l, int r, int s, double p) {
    if (m < 1 || m > std::min(r, s)) {
        throw AnalyticError("g_poly needs 1 <= m <= min(r, s)");
    }
    const double q = 1.0 - p;
    if (k < n && l < n) {
        return ipow(q, r + s - m) * (1.0 - ipow(q, m));
    }
    if (k >= n && l < n) {
        return ipow(p, r) * ipow(q, s);
    }
    if (k < n && l >= n) {
        return ipow(q, r) * ipow(p, s);
    }
    return ipow(p, r + s - m) * (1.0 - ipow(p, m));
}

double density_formula_general(const DensityInput& inp, int i, double p) {
    check_p(p);
    if (inp.tail_mass > inp.tail_tolerance) {
        throw AnalyticError("declared tail mass " + std::to_string(inp.tail_mass) + " exceeds tolerance");
    }
    if (i < 0 || i > inp.d || static_cast<std::size_t>(i) >= inp.a.size()) {
        throw AnalyticError("no density table for this i");
    }
    const auto& rows = inp.a[i];
    double total = 0.0;
    for (int k = i; k <= inp.d && static_cast<std::size_t>(k) < rows.size(); ++k) {
        double acc = 0.0;
        for (std::size_t m = 1; m < rows[k].size(); ++m) {
            if (rows[k][m] != 0.0) {
                acc += rows[k][m] * f_poly(inp.n, k, static_cast<int>(m), p);
            }
        }
        total += sign(i + k) * acc;
    }
    return total;
}

double density_cell_normal(int d, int i, const std::vector<double>& gamma_means, double p) {
    check_p(p);
    double total = 0.0;
    for (int k = i; k <= d && static_cast<std::size_t>(k) < gamma_means.size(); ++k) {
        total += sign(d - k) * ipow(p, d - k + 1) * gamma_means[k];
    }
    return total;
}

namespace {

double check_distribution(const std::map<int, double>& dist, const char* name) {
    double mass = 0.0;
    for (const auto& [m, w] : dist) {
        mass += w;
    }
    if (std::abs(mass - 1.0) > 1e-6) {
        throw AnalyticError(std::string("distribution ") + name + " does not sum to 1");
    }
    return mass;
}

double tail_sum(const std::map<int, double>& dist, double x) {
    double acc = 0.0;
    for (const auto& [m, w] : dist) {
        if (m >= 3) {
            acc += w * ipow(x, m);
        }
    }
    return acc;
}

}  // namespace

double planar_mean_euler(int mode_n, double gamma0, double gamma2, const PlanarStarDistributions& dist, double p) {
    check_p(p);
    const double q = 1.0 - p;
    switch (mode_n) {
    case 2:
        check_distribution(dist.p02, "p02");
        return -gamma2 * q + (gamma0 + gamma2) * q * q - gamma0 * tail_sum(dist.p02, q);
    case 1:
        check_distribution(dist.p01, "p01");
        check_distribution(dist.p21, "p21");
        return gamma0 - (gamma0 + gamma2) * p - gamma0 * tail_sum(dist.p01, q) + gamma2 * tail_sum(dist.p21, p);
    case 0:
        check_distribution(dist.p20, "p20");
        return gamma0 * p - (gamma0 + gamma2) * p * p + gamma2 * tail_sum(dist.p20, p);
    default:
        throw AnalyticError("unknown percolation mode");
    }
}

double archimedean_mean_euler(LatticeCode code, int mode_n, double gamma0, double p) {
    check_p(p);
    const auto& info = lattice_info(code);
    const double z = info.z;
    double polys = 0.0;
    for (int nk : info.polygons) {
        polys += ipow(p, nk) / nk;
    }
    switch (mode_n) {
    case 2:
        return -gamma0 * z / 2 * p * (1 - p) + gamma0 * (1 - p) - gamma0 * ipow(1 - p, info.z);
    case 1:
        return gamma0 - gamma0 * z / 2 * p - gamma0 * ipow(1 - p, info.z) + gamma0 * polys;
    case 0:
        return gamma0 * p - gamma0 * z / 2 * p * p + gamma0 * polys;
    default:
        throw AnalyticError("unknown percolation mode");
    }
}

PlanarStarDistributions archimedean_star_distributions(LatticeCode code) {
    const auto& info = lattice_info(code);
    PlanarStarDistributions d;
    d.p02[info.z] = 1.0;
    d.p01[info.z] = 1.0;
    // γ_2 p_{2,0}(m) = γ_0 Σ_k 1{n_k = m} / n_k with γ_2 = γ_0 (z - 2) / 2.
    for (int nk : info.polygons) {
        d.p20[nk] += 2.0 / (info.z - 2) / nk;
    }
    d.p21 = d.p20;
    return d;
}

double archimedean_vertex_intensity(LatticeCode code, double edge_length) {
    if (!(edge_length > 0.0)) {
        throw AnalyticError("edge length must be positive");
    }
    // Each vertex owns 1/n of every regular n-gon around it.
    double area = 0.0;
    for (int n : lattice_info(code).polygons) {
        area += edge_length * edge_length / (4.0 * std::tan(std::numbers::pi / n));
    }
    return 1.0 / area;
}

DensityInput archimedean_density_input(LatticeCode code, int mode_n, double gamma0) {
    const auto& info = lattice_info(code);
    const auto dist = archimedean_star_distributions(code);
    const double gamma[3] = {gamma0, gamma0 * info.z / 2.0, gamma0 * (info.z - 2) / 2.0};
    int max_m = info.z;
    for (int nk : info.polygons) {
        max_m = std::max(max_m, nk);
    }
    DensityInput inp;
    inp.d = 2;
    inp.n = mode_n;
    inp.a.assign(1, std::vector<std::vector<double>>(3, std::vector<double>(max_m + 1, 0.0)));
    auto& a = inp.a[0];
    // |S_n| under P_0: 1, z, z; under P_1: 2, 1, 2; under P_2: f_0, f_1, 1.
    switch (mode_n) {
    case 0:
        a[0][1] = gamma[0];
        a[1][2] = gamma[1];
        for (const auto& [m, w] : dist.p20) {
            a[2][m] += gamma[2] * w;
        }
        break;
    case 1:
        a[0][info.z] = gamma[0];
        a[1][1] = gamma[1];
        for (const auto& [m, w] : dist.p21) {
            a[2][m] += gamma[2] * w;
        }
        break;
    case 2:
        a[0][info.z] = gamma[0];
        a[1][2] = gamma[1];
        a[2][1] = gamma[2];
        break;
    default:
        throw AnalyticError("unknown percolation mode");
    }
    return inp;
}

IntensityRelations intensity_relations(double n01, double gamma2) {
    if (!(n01 > 2.0)) {
        throw AnalyticError("mean vertex degree must exceed 2");
    }
    return {gamma2 * 2.0 / (n01 - 2.0), gamma2 * n01 / (n01 - 2.0), 2.0 * n01 / (n01 - 2.0)};
}

double covariance_general(int d, int n, const std::map<Key7, double>& cross, const RhoProvider& rho, int i, int j,
                          double p) {
    check_p(p);
    double total = 0.0;
    for (int k = i; k <= d; ++k) {
        for (int l = j; l <= d; ++l) {
            double term = rho(k, l, i, j, p);
            auto it = cross.lower_bound({k, l, i, j, 0, 0, 0});
            const auto end = cross.lower_bound({k, l, i, j + 1, 0, 0, 0});
            if (it == end) {
                throw AnalyticError("missing cross moments for (k, l, i, j) = (" + std::to_string(k) + ", " +
                                    std::to_string(l) + ", " + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            for (; it != end; ++it) {
                const auto& key = it->first;
                term += g_poly(n, key[6], k, l, key[4], key[5], p) * it->second;
            }
            total += sign(i + j + k + l) * term;
        }
    }
    return total;
}

double covariance_cell_normal(const NormalCovTables& tables, int i, int j, double p) {
    check_p(p);
    const int d = tables.d;
    double total = 0.0;
    for (int k = i; k <= d; ++k) {
        for (int l = j; l <= d; ++l) {
            const auto tau = tables.tau.find({k, l, i, j});
            if (tau == tables.tau.end()) {
                throw AnalyticError("missing tau entry");
            }
            double term = ipow(p, 2 * d - k - l + 2) * tau->second;
            for (int m = 1; m <= d - std::max(k, l) + 1; ++m) {
                const auto c = tables.cross.find({k, l, i, j, m});
                if (c == tables.cross.end()) {
                    throw AnalyticError("missing cross entry");
                }
                term += ipow(p, 2 * d - k - l - m + 2) * (1.0 - ipow(p, m)) * c->second;
            }
            total += sign(k + l) * term;
        }
    }
    return total;
}

RhoProvider cell_normal_rho(const NormalCovTables& tables) {
    return [tables](int k, int l, int i, int j, double p) {
        const auto it = tables.tau.find({k, l, i, j});
        if (it == tables.tau.end()) {
            throw AnalyticError("missing tau entry");
        }
        const int d = tables.d;
        return (1.0 - ipow(1.0 - p, d - k + 1)) * (1.0 - ipow(1.0 - p, d - l + 1)) * it->second;
    };
}

std::map<Key7, double> cell_normal_cross(const NormalCovTables& tables) {
    std::map<Key7, double> out;
    for (const auto& [key, value] : tables.cross) {
        const auto [k, l, i, j, m] = key;
        out[{k, l, i, j, tables.d - k + 1, tables.d - l + 1, m}] = value;
    }
    return out;
}

double covariance_planar_structure(const PlanarCovInputs& in, int i, int j, double p) {
    check_p(p);
    if (i < j) {
        std::swap(i, j);
    }
    const double q = 1.0 - p;
    const double pq = p * q;
    const double g2 = in.gamma2;
    if (i == 2 && j == 2) {
        return pq * g2 * in.e2_v2sq;
    }
    if (i == 2 && j == 1) {
        return pq * (1 - 2 * p) * g2 * in.e2_v2v1;
    }
    if (i == 2 && j == 0) {
        return pq - pq * pq * g2 * in.e2_v2f0;
    }
    if (i == 1 && j == 1) {
        return pq * pq * (in.tau11 + in.gamma1 * in.e1_v1sq) + pq * (1 - 2 * p) * (1 - 2 * p) * g2 * in.e2_v1sq;
    }
    if (i == 1 && j == 0) {
        return pq * pq * (1 - 2 * p) * (in.tau10 - g2 * in.e2_v1f0) +
               pq * (1 - p - 3 * p * p + 2 * p * p * p) * g2 * in.e2_v1;
    }
    if (i == 0 && j == 0) {
        return g2 * in.mu2 * pq * pq * pq + g2 * pq * (1 - 9 * p - p * p + 20 * ipow(p, 3) - 10 * ipow(p, 4)) +
               in.tau00 * pq * pq * (1 - 2 * p) * (1 - 2 * p);
    }
    throw AnalyticError("unknown covariance pair");
}

NormalCovTables expand_planar_ingredients(const PlanarCovInputs& in) {
    NormalCovTables t;
    t.d = 2;
    const double g2 = in.gamma2;
    const double g0 = 2.0 * g2;
    const double g1 = 3.0 * g2;
    const double c[3] = {2.0, 3.0, 1.0};  // face counts per cell, asymptotically
    const double a = g2 * in.e2_v1;
    const double b = g2 * in.e2_v1f0;

    for (int i = 0; i <= 2; ++i) {
        for (int j = 0; j <= 2; ++j) {
            for (int k = i; k <= 2; ++k) {
                for (int l = j; l <= 2; ++l) {
                    double tau = 0.0;
                    if (i == 1 && j == 1) {
                        tau = in.tau11;
                    } else if (i == 0 && j == 0) {
                        tau = c[k] * c[l] * in.tau00;
                    } else if (i == 1 && j == 0) {
                        tau = c[l] * in.tau10;
                    } else if (i == 0 && j == 1) {
                        tau = c[k] * in.tau10;
                    }
                    t.tau[{k, l, i, j}] = tau;
                    for (int m = 1; m <= 3 - std::max(k, l); ++m) {
                        t.cross[{k, l, i, j, m}] = 0.0;
                    }
                }
            }
        }
    }
    auto set = [&](int k, int l, int i, int j, int m, double v) { t.cross.at({k, l, i, j, m}) = v; };

    set(2, 2, 2, 2, 1, g2 * in.e2_v2sq);

    set(2, 2, 1, 2, 1, g2 * in.e2_v2v1);
    set(1, 2, 1, 2, 1, 2.0 * g2 * in.e2_v2v1);
    set(2, 2, 2, 1, 1, g2 * in.e2_v2v1);
    set(2, 1, 2, 1, 1, 2.0 * g2 * in.e2_v2v1);

    for (int k = 0; k <= 1; ++k) {
        set(k, 2, 0, 2, 1, g2 * in.e2_v2f0);
        set(2, k, 2, 0, 1, g2 * in.e2_v2f0);
    }
    set(2, 2, 0, 2, 1, 1.0);
    set(2, 2, 2, 0, 1, 1.0);

    set(2, 2, 1, 1, 1, g2 * in.e2_v1sq);
    set(2, 1, 1, 1, 1, 2.0 * g2 * in.e2_v1sq);
    set(1, 2, 1, 1, 1, 2.0 * g2 * in.e2_v1sq);
    set(1, 1, 1, 1, 2, in.gamma1 * in.e1_v1sq);
    set(1, 1, 1, 1, 1, 4.0 * g2 * in.e2_v1sq - 2.0 * in.gamma1 * in.e1_v1sq);

    set(2, 2, 0, 1, 1, a);
    set(2, 1, 0, 1, 1, 2.0 * a);
    set(1, 2, 0, 1, 1, b);
    set(1, 1, 0, 1, 2, a);
    set(1, 1, 0, 1, 1, 2.0 * b - 2.0 * a);
    set(0, 2, 0, 1, 1, b);
    set(0, 1, 0, 1, 2, 2.0 * a);
    set(0, 1, 0, 1, 1, 2.0 * b - 4.0 * a);

    set(2, 2, 1, 0, 1, a);
    set(2, 1, 1, 0, 1, b);
    set(2, 0, 1, 0, 1, b);
    set(1, 2, 1, 0, 1, 2.0 * a);
    set(1, 1, 1, 0, 2, a);
    set(1, 1, 1, 0, 1, 2.0 * b - 2.0 * a);
    set(1, 0, 1, 0, 2, 2.0 * a);
    set(1, 0, 1, 0, 1, 2.0 * b - 4.0 * a);

    const double mu = g2 * in.mu2;
    set(0, 0, 0, 0, 1, mu - 9.0 * g0);
    set(1, 0, 0, 0, 1, mu - 4.0 * g1);
    set(0, 1, 0, 0, 1, mu - 6.0 * g0);
    set(1, 1, 0, 0, 1, mu - 2.0 * g1);
    set(0, 0, 0, 0, 2, 3.0 * g0);
    set(0, 1, 0, 0, 2, 3.0 * g0);
    set(2, 0, 0, 0, 1, 3.0 * g0);
    set(0, 2, 0, 0, 1, 3.0 * g0);
    set(2, 1, 0, 0, 1, 3.0 * g0);
    set(1, 2, 0, 0, 1, 2.0 * g1);
    set(1, 0, 0, 0, 2, 2.0 * g1);
    set(0, 0, 0, 0, 3, g0);
    set(1, 1, 0, 0, 2, g1);
    set(2, 2, 0, 0, 1, g2);
    return t;
}

double pv_variance_euler(double gamma2, double mu2, double p) {
    check_p(p);
    const double pq = p * (1.0 - p);
    return gamma2 * mu2 * pq * pq * pq +
           gamma2 * pq * (1 - 8 * p - 6 * p * p + 28 * ipow(p, 3) - 14 * ipow(p, 4));
}

double sigma00_max_threshold(double gamma2, double tau00) { return 86.0 / 3.0 + 4.0 * tau00 / (3.0 * gamma2); }

double line_mean_euler(double gamma2, double p) {
    check_p(p);
    return gamma2 * p * (1 - p) * (p * p - 3 * p + 1);
}

double horner(const std::vector<double>& coeffs, double p) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * p + *it;
    }
    return acc;
}

}  // namespace faceperc
