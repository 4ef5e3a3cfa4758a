#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "faceperc/analytic.hpp"
#include "faceperc/measure.hpp"
#include "faceperc/percolation.hpp"
#include "faceperc/tessellation.hpp"

namespace faceperc {

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long replicates = 0;
};

/// How V_i(Z ∩ W_t) is evaluated per replicate.
enum class EstimatorKind {
    interior,  // signed sum over black faces clipped to W_t
    closed,    // interior plus the boundary term
    symmetric, // interior plus half the boundary term
    steiner,   // unclipped black faces with Steiner point in W_t
};

EstimatorKind parse_estimator_kind(const std::string& text);
const char* to_string(EstimatorKind kind);

std::array<double, 3> volumes_black(const PlanarTessellation& t, const Coloring& c, const Window& w,
                                    EstimatorKind kind);

struct SamplingOptions {
    double t_scale = 400.0;
    int replicates = 200;
    std::uint64_t seed = 1;
    /// Area-one window shape W; the observation window is its t-scaled copy.
    FaceGeometry window = Window::centered_square(1.0).polygon;
    EstimatorKind kind = EstimatorKind::interior;
    /// Worker threads; 0 picks the hardware concurrency.
    int threads = 0;
};

/// Runs fn(index) for index in [0, count) on `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Seed of replicate `index` under master seed `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, int index);

/// Per-replicate black-phase intrinsic volumes on W_t. Each replicate builds
/// an independent tessellation and one colour variate per n-face shared by
/// all p (monotone coupling across the grid).
struct VolumeSamples {
    std::vector<double> ps;
    int replicates = 0;
    double area = 0.0;
    std::vector<std::array<double, 3>> values;  // [replicate * ps.size() + p index]

    const std::array<double, 3>& at(int rep, std::size_t pi) const { return values[rep * ps.size() + pi]; }
};

VolumeSamples sample_black_volumes(const GeneratorConfig& cfg, int mode_n, const std::vector<double>& ps,
                                   const SamplingOptions& opt);

/// Mean of V_i / area with the across-replicate standard error.
Estimate density_from_samples(const VolumeSamples& s, std::size_t pi, int i);
/// Sample covariance of (V_i, V_j) / area with a delete-one jackknife stderr.
Estimate covariance_from_samples(const VolumeSamples& s, std::size_t pi, int i, int j);

Estimate estimate_density(const GeneratorConfig& cfg, int mode_n, double p, int i, double t_scale, int replicates,
                          std::uint64_t seed, EstimatorKind kind = EstimatorKind::interior);
Estimate estimate_covariance(const GeneratorConfig& cfg, int mode_n, double p, int i, int j, double t_scale,
                             int replicates, std::uint64_t seed, EstimatorKind kind = EstimatorKind::interior);

/// Uncoloured face sums Σ_{F in X_k} V_i(F ∩ W_t) per replicate, [rep][k][i].
std::vector<std::array<std::array<double, 3>, 3>> sample_face_sums(const GeneratorConfig& cfg,
                                                                   const SamplingOptions& opt);
Estimate tau_from_samples(const std::vector<std::array<std::array<double, 3>, 3>>& sums, double area, int i, int j,
                          int k, int l);
Estimate estimate_tau(const GeneratorConfig& cfg, int i, int j, int k, int l, double t_scale, int replicates,
                      std::uint64_t seed);

struct PalmOptions {
    double t_scale = 400.0;
    int replicates = 20;
    std::uint64_t seed = 1;
    int max_m = 32;   // M: cutoff of p_{k,n}(m)
    int r_max = 16;   // R_max: cutoff of r, s in the cross table
    bool cross = true;
    int threads = 0;
};

/// Palm statistics by minus-sampling: every face whose Steiner point lies in
/// the core window contributes. Intensities and γ_k-weighted tables are
/// per-replicate densities; E_k averages are ratio estimators with
/// jackknife errors over replicates.
struct PalmTable {
    int mode_n = 2;
    long replicates = 0;
    std::array<Estimate, 3> gamma;
    std::array<std::array<Estimate, 3>, 3> nkl;
    /// p_{k,n}(m) for m in [0, M]; tail = P_k(|S_n| > M).
    std::array<std::array<std::vector<Estimate>, 3>, 3> pkn;
    std::array<std::array<Estimate, 3>, 3> pkn_tail;
    /// Named moments: mu2, E2_f0, E2_V2, E2_V2sq, E2_V2V1, E2_V2f0, E1_V1sq,
    /// E2_V1sq, E2_V1f0, E2_V1, E1_V1, E0_f0...; exchange_k_l holds the
    /// density γ_k n_{k,l} - γ_l n_{l,k}.
    std::map<std::string, Estimate> moments;
    /// γ_k E_k[V_i(F) 1{|S_n| = m}] keyed (i, k, m) for the mode of the table.
    std::map<std::array<int, 3>, Estimate> density_terms;
    /// γ_k E_k[V_i(F) V_j(S_l^{m,s}) 1{|S_n| = r}] keyed (k, l, i, j, r, s, m).
    std::map<Key7, Estimate> cross;
    /// Fraction of sampled faces (per k) with |S_n| beyond R_max or with a
    /// neighbour beyond R_max; their cross contributions are dropped.
    std::array<double, 3> cross_tail{0.0, 0.0, 0.0};
};

PalmTable estimate_palm(const GeneratorConfig& cfg, int mode_n, const PalmOptions& opt);

/// Density tables for density_formula_general from a Palm table.
DensityInput density_input_from_palm(const PalmTable& palm);

/// Theorem-level planar covariance inputs (cell mode) from a Palm table and
/// a τ estimate; γ_1 is taken from the table.
PlanarCovInputs planar_inputs_from_palm(const PalmTable& palm, double tau11, double tau10, double tau00);

/// Both sides of the exchange formula for a test function g(F, G) with F a
/// k-face and G an l-face in S_l(F), as densities over the core region.
struct ExchangeSums {
    double lhs = 0.0;  // Σ_{F: s(F) in core} Σ_{G in S_l(F)} g(F, G) / area
    double rhs = 0.0;  // Σ_{G: s(G) in core} Σ_{F in S_k(G)} g(F, G) / area
};

ExchangeSums exchange_sums(const PlanarTessellation& t, int k, int l,
                           const std::function<double(FaceRef, FaceRef)>& g);

struct RhoParams {
    int mode_n = 2;
    int first_term_samples = 20000;
    int radial_nodes = 24;
    int samples_per_node = 2000;
    /// Truncation radius; <= 0 selects 6 / sqrt(γ).
    double r_trunc = 0.0;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct RhoResult {
    Estimate rho;
    Estimate first_term;
    Estimate second_term;
    std::vector<double> radii;
    std::vector<double> integrand;  // node means of the covariance integrand
};

/// Poisson-Voronoi ρ_{i,j}^{k,l}(p) from local simulations of η ∪ {0} and
/// η ∪ {0, x}. Throws AnalyticError("truncation unsafe") when the integrand
/// has not decayed at the truncation radius.
RhoResult estimate_rho_voronoi(int i, int j, int k, int l, double p, double gamma, const RhoParams& params);

}  // namespace faceperc
