#pragma once

#include <array>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "faceperc/tessellation.hpp"

namespace faceperc {

class AnalyticError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

double f_poly(int n, int k, int r, double p);
double g_poly(int n, int m, int k, int l, int r, int s, double p);

/// Palm tables for the mean densities: a[i][k][m] = γ_k E_k[V_i(F(0)) 1{|S_n(0)| = m}].
struct DensityInput {
    int d = 2;
    int n = 2;
    std::vector<std::vector<std::vector<double>>> a;
    /// Mass of the star-size distributions beyond the tabulated m.
    double tail_mass = 0.0;
    double tail_tolerance = 1e-6;
};

double density_formula_general(const DensityInput& inp, int i, double p);

/// Cell percolation on a normal tessellation; gamma_means[k] = γ_k E_k V_i(F).
double density_cell_normal(int d, int i, const std::vector<double>& gamma_means, double p);

/// Star-size distributions p_{k,n}(m) = P_k(|S_n(0)| = m), keyed by m.
struct PlanarStarDistributions {
    std::map<int, double> p02;
    std::map<int, double> p01;
    std::map<int, double> p21;
    std::map<int, double> p20;
};

double planar_mean_euler(int mode_n, double gamma0, double gamma2, const PlanarStarDistributions& dist, double p);
double archimedean_mean_euler(LatticeCode code, int mode_n, double gamma0, double p);

/// Vertex intensity γ_0 of an Archimedean lattice with the given edge length.
double archimedean_vertex_intensity(LatticeCode code, double edge_length = 1.0);

/// Exact tables of an Archimedean lattice (i = 0 only) for density_formula_general.
DensityInput archimedean_density_input(LatticeCode code, int mode_n, double gamma0);
PlanarStarDistributions archimedean_star_distributions(LatticeCode code);

struct IntensityRelations {
    double gamma0;
    double gamma1;
    double n20;
};

IntensityRelations intensity_relations(double n01, double gamma2);

// Covariance ingredients. Keys are (k, l, i, j) for τ and ρ; cross moments
// γ_k E_k[V_i(F(0)) V_j(S_l^{m,s}(0)) 1{|S_n(0)| = r}] are keyed
// (k, l, i, j, r, s, m); for normal cell percolation the reduced cross moments
// γ_k E_k[V_i(F(0)) V_j(S_l^m(0))] are keyed (k, l, i, j, m).
using Key4 = std::array<int, 4>;
using Key5 = std::array<int, 5>;
using Key7 = std::array<int, 7>;
using RhoProvider = std::function<double(int k, int l, int i, int j, double p)>;

double covariance_general(int d, int n, const std::map<Key7, double>& cross, const RhoProvider& rho, int i, int j,
                          double p);

struct NormalCovTables {
    int d = 2;
    std::map<Key4, double> tau;
    std::map<Key5, double> cross;
};

double covariance_cell_normal(const NormalCovTables& tables, int i, int j, double p);

/// ρ for normal cell percolation: (1-(1-p)^(d-k+1)) (1-(1-p)^(d-l+1)) τ.
RhoProvider cell_normal_rho(const NormalCovTables& tables);

/// Cross moments of normal cell percolation in the (k, l, i, j, r, s, m) layout
/// with r = d - k + 1 and s = d - l + 1.
std::map<Key7, double> cell_normal_cross(const NormalCovTables& tables);

struct PlanarCovInputs {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double tau11 = 0.0;  // τ_{1,1}^{2,2}
    double tau10 = 0.0;  // τ_{1,0}^{2,2}
    double tau00 = 0.0;  // τ_{0,0}^{2,2}
    double mu2 = 0.0;
    double e2_v2sq = 0.0;
    double e2_v2v1 = 0.0;
    double e2_v2f0 = 0.0;
    double e1_v1sq = 0.0;
    double e2_v1sq = 0.0;
    double e2_v1f0 = 0.0;
    double e2_v1 = 0.0;
};

double covariance_planar_structure(const PlanarCovInputs& in, int i, int j, double p);

/// The planar inputs written out as full τ and cross tables, using the
/// normal relations γ_0 = 2γ_2, γ_1 = 3γ_2 and face-star counting.
NormalCovTables expand_planar_ingredients(const PlanarCovInputs& in);

/// σ_{0,0} for Poisson-Voronoi cell percolation (τ_{0,0}^{2,2} = γ_2).
double pv_variance_euler(double gamma2, double mu2, double p);

/// σ_{0,0} has a strict global maximum at 1/2 iff μ_2 exceeds this value.
double sigma00_max_threshold(double gamma2, double tau00);

/// Planar cell-mode mean Euler density of a line tessellation.
double line_mean_euler(double gamma2, double p);

/// Evaluates Σ c_k p^k by Horner's rule.
double horner(const std::vector<double>& coeffs, double p);

}  // namespace faceperc
