#include "faceperc/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "faceperc/rng.hpp"

namespace faceperc {

namespace {

int resolve_threads(int threads) {
    if (threads > 0) {
        return threads;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Estimate mean_estimate(const std::vector<double>& xs) {
    Estimate e;
    e.replicates = static_cast<long>(xs.size());
    if (xs.empty()) {
        return e;
    }
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    e.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) {
            ss += (x - e.mean) * (x - e.mean);
        }
        e.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return e;
}

/// Σ num / Σ den with a delete-one jackknife error over replicates.
Estimate ratio_estimate(const std::vector<double>& num, const std::vector<double>& den) {
    Estimate e;
    const std::size_t n = num.size();
    e.replicates = static_cast<long>(n);
    double sn = 0.0;
    double sd = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        sn += num[r];
        sd += den[r];
    }
    if (sd <= 0.0) {
        return e;
    }
    e.mean = sn / sd;
    if (n > 1) {
        std::vector<double> loo(n);
        double avg = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double d = sd - den[r];
            loo[r] = d > 0.0 ? (sn - num[r]) / d : e.mean;
            avg += loo[r];
        }
        avg /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : loo) {
            ss += (v - avg) * (v - avg);
        }
        e.std_error = std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return e;
}

/// Unbiased sample covariance / area with a delete-one jackknife error.
Estimate covariance_estimate(const std::vector<double>& x, const std::vector<double>& y, double area) {
    Estimate e;
    const std::size_t n = x.size();
    e.replicates = static_cast<long>(n);
    if (n < 2) {
        return e;
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        mx += x[r];
        my += y[r];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sx = 0.0;
    double sy = 0.0;
    double sxy = 0.0;
    std::vector<double> cx(n);
    std::vector<double> cy(n);
    for (std::size_t r = 0; r < n; ++r) {
        cx[r] = x[r] - mx;
        cy[r] = y[r] - my;
        sx += cx[r];
        sy += cy[r];
        sxy += cx[r] * cy[r];
    }
    const double dn = static_cast<double>(n);
    e.mean = (sxy - sx * sy / dn) / (dn - 1.0) / area;
    if (n > 2) {
        std::vector<double> loo(n);
        double avg = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double m = dn - 1.0;
            const double ax = sx - cx[r];
            const double ay = sy - cy[r];
            loo[r] = ((sxy - cx[r] * cy[r]) - ax * ay / m) / (m - 1.0) / area;
            avg += loo[r];
        }
        avg /= dn;
        double ss = 0.0;
        for (double v : loo) {
            ss += (v - avg) * (v - avg);
        }
        e.std_error = std::sqrt(ss * (dn - 1.0) / dn);
    }
    return e;
}

GeneratorConfig replicate_config(const GeneratorConfig& cfg, const FaceGeometry& window, double t, std::uint64_t seed) {
    GeneratorConfig c = cfg;
    c.region = Window::scaled(window, t);
    c.seed = seed;
    return c;
}

}  // namespace

std::array<double, 3> volumes_black(const PlanarTessellation& t, const Coloring& c, const Window& w,
                                    EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::interior:
            return volumes_black_interior(t, c, w);
        case EstimatorKind::closed:
            return volumes_black_closed(t, c, w);
        case EstimatorKind::symmetric: {
            auto v = volumes_black_interior(t, c, w);
            const auto b = volumes_black_boundary(t, c, w);
            for (int i = 0; i < 3; ++i) {
                v[i] += 0.5 * b[i];
            }
            return v;
        }
        case EstimatorKind::steiner:
            return volumes_black_steiner(t, c, w);
    }
    return {0.0, 0.0, 0.0};
}

EstimatorKind parse_estimator_kind(const std::string& text) {
    if (text == "interior") {
        return EstimatorKind::interior;
    }
    if (text == "closed") {
        return EstimatorKind::closed;
    }
    if (text == "symmetric") {
        return EstimatorKind::symmetric;
    }
    if (text == "steiner") {
        return EstimatorKind::steiner;
    }
    throw std::invalid_argument("unknown estimator kind: " + text);
}

const char* to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::interior:
            return "interior";
        case EstimatorKind::closed:
            return "closed";
        case EstimatorKind::symmetric:
            return "symmetric";
        case EstimatorKind::steiner:
            return "steiner";
    }
    return "?";
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    const int workers = std::min(resolve_threads(threads), std::max(count, 1));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count || failed.load()) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::uint64_t replicate_seed(std::uint64_t seed, int index) { return hash_key(seed, static_cast<std::uint64_t>(index)); }

VolumeSamples sample_black_volumes(const GeneratorConfig& cfg, int mode_n, const std::vector<double>& ps,
                                   const SamplingOptions& opt) {
    if (opt.replicates < 1) {
        throw std::invalid_argument("replicates must be positive");
    }
    if (!(opt.t_scale > 0.0)) {
        throw std::invalid_argument("t_scale must be positive");
    }
    VolumeSamples out;
    out.ps = ps;
    out.replicates = opt.replicates;
    out.area = Window::scaled(opt.window, opt.t_scale).area();
    out.values.assign(static_cast<std::size_t>(opt.replicates) * ps.size(), {0.0, 0.0, 0.0});
    parallel_for(opt.replicates, opt.threads, [&](int rep) {
        const auto rc = replicate_config(cfg, opt.window, opt.t_scale, replicate_seed(opt.seed, rep));
        const auto t = build_tessellation(rc);
        const std::uint64_t color_seed = hash_key(opt.seed, static_cast<std::uint64_t>(rep), 1);
        for (std::size_t pi = 0; pi < ps.size(); ++pi) {
            const auto c = color(t, mode_n, ps[pi], color_seed);
            out.values[rep * ps.size() + pi] = volumes_black(t, c, rc.region, opt.kind);
        }
    });
    return out;
}

Estimate density_from_samples(const VolumeSamples& s, std::size_t pi, int i) {
    std::vector<double> xs(s.replicates);
    for (int r = 0; r < s.replicates; ++r) {
        xs[r] = s.at(r, pi)[i] / s.area;
    }
    return mean_estimate(xs);
}

Estimate covariance_from_samples(const VolumeSamples& s, std::size_t pi, int i, int j) {
    std::vector<double> x(s.replicates);
    std::vector<double> y(s.replicates);
    for (int r = 0; r < s.replicates; ++r) {
        x[r] = s.at(r, pi)[i];
        y[r] = s.at(r, pi)[j];
    }
    return covariance_estimate(x, y, s.area);
}

Estimate estimate_density(const GeneratorConfig& cfg, int mode_n, double p, int i, double t_scale, int replicates,
                          std::uint64_t seed, EstimatorKind kind) {
    SamplingOptions opt;
    opt.t_scale = t_scale;
    opt.replicates = replicates;
    opt.seed = seed;
    opt.kind = kind;
    return density_from_samples(sample_black_volumes(cfg, mode_n, {p}, opt), 0, i);
}

Estimate estimate_covariance(const GeneratorConfig& cfg, int mode_n, double p, int i, int j, double t_scale,
                             int replicates, std::uint64_t seed, EstimatorKind kind) {
    SamplingOptions opt;
    opt.t_scale = t_scale;
    opt.replicates = replicates;
    opt.seed = seed;
    opt.kind = kind;
    return covariance_from_samples(sample_black_volumes(cfg, mode_n, {p}, opt), 0, i, j);
}

std::vector<std::array<std::array<double, 3>, 3>> sample_face_sums(const GeneratorConfig& cfg,
                                                                   const SamplingOptions& opt) {
    if (opt.replicates < 1) {
        throw std::invalid_argument("replicates must be positive");
    }
    std::vector<std::array<std::array<double, 3>, 3>> out(opt.replicates);
    parallel_for(opt.replicates, opt.threads, [&](int rep) {
        const auto rc = replicate_config(cfg, opt.window, opt.t_scale, replicate_seed(opt.seed, rep));
        const auto t = build_tessellation(rc);
        out[rep] = face_sums_clipped(t, rc.region);
    });
    return out;
}

Estimate tau_from_samples(const std::vector<std::array<std::array<double, 3>, 3>>& sums, double area, int i, int j,
                          int k, int l) {
    std::vector<double> x(sums.size());
    std::vector<double> y(sums.size());
    for (std::size_t r = 0; r < sums.size(); ++r) {
        x[r] = sums[r][k][i];
        y[r] = sums[r][l][j];
    }
    return covariance_estimate(x, y, area);
}

Estimate estimate_tau(const GeneratorConfig& cfg, int i, int j, int k, int l, double t_scale, int replicates,
                      std::uint64_t seed) {
    SamplingOptions opt;
    opt.t_scale = t_scale;
    opt.replicates = replicates;
    opt.seed = seed;
    return tau_from_samples(sample_face_sums(cfg, opt), Window::scaled(opt.window, t_scale).area(), i, j, k, l);
}

// ---------------------------------------------------------------------------
// Palm statistics

namespace {

struct MomentSpec {
    const char* name;
    int k;
    double (*value)(const IntrinsicVolumes& v, double f0);
};

const std::vector<MomentSpec>& moment_specs() {
    static const std::vector<MomentSpec> specs = {
        {"mu2", 2, [](const IntrinsicVolumes&, double f0) { return f0 * f0; }},
        {"E2_f0", 2, [](const IntrinsicVolumes&, double f0) { return f0; }},
        {"E2_V2", 2, [](const IntrinsicVolumes& v, double) { return v.v2; }},
        {"E2_V2sq", 2, [](const IntrinsicVolumes& v, double) { return v.v2 * v.v2; }},
        {"E2_V2V1", 2, [](const IntrinsicVolumes& v, double) { return v.v2 * v.v1; }},
        {"E2_V2f0", 2, [](const IntrinsicVolumes& v, double f0) { return v.v2 * f0; }},
        {"E2_V1", 2, [](const IntrinsicVolumes& v, double) { return v.v1; }},
        {"E2_V1sq", 2, [](const IntrinsicVolumes& v, double) { return v.v1 * v.v1; }},
        {"E2_V1f0", 2, [](const IntrinsicVolumes& v, double f0) { return v.v1 * f0; }},
        {"E1_V1", 1, [](const IntrinsicVolumes& v, double) { return v.v1; }},
        {"E1_V1sq", 1, [](const IntrinsicVolumes& v, double) { return v.v1 * v.v1; }},
    };
    return specs;
}

struct PalmReplicate {
    double area = 0.0;
    std::array<double, 3> count{0.0, 0.0, 0.0};
    std::array<std::array<double, 3>, 3> star_sum{};
    // [k][n][m] for m in [0, M]; index M + 1 holds the tail.
    std::array<std::array<std::vector<double>, 3>, 3> hist;
    std::vector<double> moments;
    std::map<std::array<int, 3>, double> terms;
    std::map<long long, double> cross;
    std::array<double, 3> cross_dropped{0.0, 0.0, 0.0};
};

std::vector<int> star_indices(const PlanarTessellation& t, FaceRef f, int n) {
    std::vector<int> out;
    for (const auto& g : face_star(t, f, n)) {
        out.push_back(g.index);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int shared_count(const std::vector<int>& a, const std::vector<int>& b) {
    int m = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++m;
            ++ia;
            ++ib;
        }
    }
    return m;
}

double face_f0(const PlanarTessellation& t, FaceRef f) {
    if (f.dim == 0) {
        return 1.0;
    }
    if (f.dim == 1) {
        return 2.0;
    }
    return static_cast<double>(t.cells()[f.index].vertices.size());
}

PalmReplicate palm_replicate(const PlanarTessellation& t, int mode_n, const PalmOptions& opt) {
    PalmReplicate rep;
    const Window& core = t.core_region();
    rep.area = core.area();
    const int M = opt.max_m;
    const int R = opt.r_max;
    const long long R1 = R + 1;
    for (auto& row : rep.hist) {
        for (auto& h : row) {
            h.assign(M + 2, 0.0);
        }
    }
    const auto& specs = moment_specs();
    rep.moments.assign(specs.size(), 0.0);

    for (int k = 0; k < 3; ++k) {
        for (std::size_t idx = 0; idx < t.count(k); ++idx) {
            const FaceRef f{k, static_cast<int>(idx)};
            if (!core.contains(t.steiner(f))) {
                continue;
            }
            if (!t.trusted(f)) {
                throw PaddingError();
            }
            rep.count[k] += 1.0;
            const auto& vol = t.volumes(f);
            const double f0 = face_f0(t, f);
            std::array<int, 3> sizes{};
            for (int l = 0; l < 3; ++l) {
                sizes[l] = static_cast<int>(face_star(t, f, l).size());
                rep.star_sum[k][l] += sizes[l];
                rep.hist[k][l][std::min(sizes[l], M + 1)] += 1.0;
            }
            for (std::size_t s = 0; s < specs.size(); ++s) {
                if (specs[s].k == k) {
                    rep.moments[s] += specs[s].value(vol, f0);
                }
            }
            const int r = sizes[mode_n];
            if (r <= M) {
                for (int i = 0; i <= k; ++i) {
                    rep.terms[{i, k, r}] += vol[i];
                }
            }

            if (!opt.cross) {
                continue;
            }
            if (r > R) {
                rep.cross_dropped[k] += 1.0;
                continue;
            }
            const auto star = star_indices(t, f, mode_n);
            bool dropped = false;
            for (int l = 0; l < 3; ++l) {
                std::vector<int> candidates;
                for (int h : star) {
                    for (const auto& g : face_star(t, {mode_n, h}, l)) {
                        candidates.push_back(g.index);
                    }
                }
                std::sort(candidates.begin(), candidates.end());
                candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
                for (int gi : candidates) {
                    const FaceRef g{l, gi};
                    if (!t.complete(g)) {
                        dropped = true;
                        continue;
                    }
                    const auto gstar = star_indices(t, g, mode_n);
                    const int s = static_cast<int>(gstar.size());
                    if (s > R) {
                        dropped = true;
                        continue;
                    }
                    const int m = shared_count(star, gstar);
                    const auto& gv = t.volumes(g);
                    for (int i = 0; i <= k; ++i) {
                        for (int j = 0; j <= l; ++j) {
                            const long long key =
                                (((((static_cast<long long>(k) * 3 + l) * 3 + i) * 3 + j) * R1 + r) * R1 + s) * R1 + m;
                            rep.cross[key] += vol[i] * gv[j];
                        }
                    }
                }
            }
            if (dropped) {
                rep.cross_dropped[k] += 1.0;
            }
        }
    }
    return rep;
}

Key7 decode_cross_key(long long key, int r_max) {
    const long long R1 = r_max + 1;
    Key7 out{};
    out[6] = static_cast<int>(key % R1);
    key /= R1;
    out[5] = static_cast<int>(key % R1);
    key /= R1;
    out[4] = static_cast<int>(key % R1);
    key /= R1;
    out[3] = static_cast<int>(key % 3);
    key /= 3;
    out[2] = static_cast<int>(key % 3);
    key /= 3;
    out[1] = static_cast<int>(key % 3);
    key /= 3;
    out[0] = static_cast<int>(key);
    return out;
}

}  // namespace

PalmTable estimate_palm(const GeneratorConfig& cfg, int mode_n, const PalmOptions& opt) {
    if (mode_n < 0 || mode_n > 2) {
        throw std::invalid_argument("mode must be 0, 1 or 2");
    }
    if (opt.replicates < 1) {
        throw std::invalid_argument("replicates must be positive");
    }
    const int nrep = opt.replicates;
    const FaceGeometry square = Window::centered_square(1.0).polygon;
    std::vector<PalmReplicate> reps(nrep);
    parallel_for(nrep, opt.threads, [&](int r) {
        const auto rc = replicate_config(cfg, square, opt.t_scale, replicate_seed(opt.seed, r));
        reps[r] = palm_replicate(build_tessellation(rc), mode_n, opt);
    });

    PalmTable out;
    out.mode_n = mode_n;
    out.replicates = nrep;
    const int M = opt.max_m;
    std::vector<double> x(nrep);
    std::vector<double> y(nrep);

    auto densities = [&](auto&& value) {
        for (int r = 0; r < nrep; ++r) {
            x[r] = value(reps[r]) / reps[r].area;
        }
        return mean_estimate(x);
    };
    auto ratio = [&](auto&& num, int k) {
        for (int r = 0; r < nrep; ++r) {
            x[r] = num(reps[r]);
            y[r] = reps[r].count[k];
        }
        return ratio_estimate(x, y);
    };

    for (int k = 0; k < 3; ++k) {
        out.gamma[k] = densities([k](const PalmReplicate& p) { return p.count[k]; });
        for (int l = 0; l < 3; ++l) {
            out.nkl[k][l] = ratio([k, l](const PalmReplicate& p) { return p.star_sum[k][l]; }, k);
            out.pkn[k][l].resize(M + 1);
            for (int m = 0; m <= M; ++m) {
                out.pkn[k][l][m] = ratio([k, l, m](const PalmReplicate& p) { return p.hist[k][l][m]; }, k);
            }
            out.pkn_tail[k][l] = ratio([k, l, M](const PalmReplicate& p) { return p.hist[k][l][M + 1]; }, k);
            if (k != l) {
                out.moments["exchange_" + std::to_string(k) + "_" + std::to_string(l)] = densities(
                    [k, l](const PalmReplicate& p) { return p.star_sum[k][l] - p.star_sum[l][k]; });
            }
        }
        double faces = 0.0;
        double dropped = 0.0;
        for (const auto& p : reps) {
            faces += p.count[k];
            dropped += p.cross_dropped[k];
        }
        out.cross_tail[k] = faces > 0.0 ? dropped / faces : 0.0;
    }
    const auto& specs = moment_specs();
    for (std::size_t s = 0; s < specs.size(); ++s) {
        out.moments[specs[s].name] = ratio([s](const PalmReplicate& p) { return p.moments[s]; }, specs[s].k);
    }

    std::map<std::array<int, 3>, char> term_keys;
    std::map<long long, char> cross_keys;
    for (const auto& p : reps) {
        for (const auto& kv : p.terms) {
            term_keys.emplace(kv.first, 0);
        }
        for (const auto& kv : p.cross) {
            cross_keys.emplace(kv.first, 0);
        }
    }
    for (const auto& kv : term_keys) {
        const auto key = kv.first;
        out.density_terms[key] = densities([&key](const PalmReplicate& p) {
            const auto it = p.terms.find(key);
            return it == p.terms.end() ? 0.0 : it->second;
        });
    }
    for (const auto& kv : cross_keys) {
        const long long key = kv.first;
        out.cross[decode_cross_key(key, opt.r_max)] = densities([key](const PalmReplicate& p) {
            const auto it = p.cross.find(key);
            return it == p.cross.end() ? 0.0 : it->second;
        });
    }
    return out;
}

DensityInput density_input_from_palm(const PalmTable& palm) {
    DensityInput in;
    in.d = 2;
    in.n = palm.mode_n;
    std::size_t width = 1;
    for (const auto& row : palm.pkn) {
        for (const auto& v : row) {
            width = std::max(width, v.size());
        }
    }
    in.a.assign(3, std::vector<std::vector<double>>(3, std::vector<double>(width, 0.0)));
    for (const auto& [key, est] : palm.density_terms) {
        if (static_cast<std::size_t>(key[2]) < width) {
            in.a[key[0]][key[1]][key[2]] = est.mean;
        }
    }
    double tail = 0.0;
    for (int k = 0; k < 3; ++k) {
        tail = std::max(tail, palm.pkn_tail[k][palm.mode_n].mean);
    }
    in.tail_mass = tail;
    return in;
}

PlanarCovInputs planar_inputs_from_palm(const PalmTable& palm, double tau11, double tau10, double tau00) {
    auto moment = [&palm](const char* name) {
        const auto it = palm.moments.find(name);
        if (it == palm.moments.end()) {
            throw std::invalid_argument(std::string("palm table lacks moment ") + name);
        }
        return it->second.mean;
    };
    PlanarCovInputs in;
    in.gamma1 = palm.gamma[1].mean;
    in.gamma2 = palm.gamma[2].mean;
    in.tau11 = tau11;
    in.tau10 = tau10;
    in.tau00 = tau00;
    in.mu2 = moment("mu2");
    in.e2_v2sq = moment("E2_V2sq");
    in.e2_v2v1 = moment("E2_V2V1");
    in.e2_v2f0 = moment("E2_V2f0");
    in.e1_v1sq = moment("E1_V1sq");
    in.e2_v1sq = moment("E2_V1sq");
    in.e2_v1f0 = moment("E2_V1f0");
    in.e2_v1 = moment("E2_V1");
    return in;
}

ExchangeSums exchange_sums(const PlanarTessellation& t, int k, int l,
                           const std::function<double(FaceRef, FaceRef)>& g) {
    const Window& core = t.core_region();
    ExchangeSums out;
    for (std::size_t idx = 0; idx < t.count(k); ++idx) {
        const FaceRef f{k, static_cast<int>(idx)};
        if (core.contains(t.steiner(f))) {
            for (const auto& h : face_star(t, f, l)) {
                out.lhs += g(f, h);
            }
        }
    }
    for (std::size_t idx = 0; idx < t.count(l); ++idx) {
        const FaceRef h{l, static_cast<int>(idx)};
        if (core.contains(t.steiner(h))) {
            for (const auto& f : face_star(t, h, k)) {
                out.rhs += g(f, h);
            }
        }
    }
    out.lhs /= core.area();
    out.rhs /= core.area();
    return out;
}

// ---------------------------------------------------------------------------
// Poisson-Voronoi ρ

namespace {

/// Keeps the part of the convex polygon closer to `site` than to `other`.
std::vector<Point2> clip_bisector(const std::vector<Point2>& poly, Point2 site, Point2 other) {
    const Point2 nrm = other - site;
    const double c = 0.5 * (dot(other, other) - dot(site, site));
    std::vector<Point2> out;
    out.reserve(poly.size() + 1);
    const std::size_t n = poly.size();
    for (std::size_t a = 0; a < n; ++a) {
        const Point2 p = poly[a];
        const Point2 q = poly[(a + 1) % n];
        const double fp = dot(p, nrm) - c;
        const double fq = dot(q, nrm) - c;
        if (fp <= 0.0) {
            out.push_back(p);
        }
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            const double s = fp / (fp - fq);
            out.push_back(p + s * (q - p));
        }
    }
    return out;
}

std::vector<Point2> local_cell(Point2 site, const std::vector<Point2>& points, double half) {
    std::vector<Point2> poly = {{site.x - half, site.y - half},
                                {site.x + half, site.y - half},
                                {site.x + half, site.y + half},
                                {site.x - half, site.y + half}};
    for (const auto& q : points) {
        if (q == site) {
            continue;
        }
        poly = clip_bisector(poly, site, q);
        if (poly.empty()) {
            break;
        }
    }
    return poly;
}

double max_radius(const std::vector<Point2>& poly, Point2 site) {
    double r = 0.0;
    for (const auto& v : poly) {
        r = std::max(r, distance(v, site));
    }
    return r;
}

/// Poisson points of intensity γ in a disk grown ring by ring, so the sample
/// stays an exact Poisson restriction whatever the final radius.
class LocalPoisson {
  public:
    LocalPoisson(double gamma, Point2 centre, std::uint64_t key) : gamma_(gamma), centre_(centre), rng_(key) {}

    void grow_to(double radius) {
        if (radius <= radius_) {
            return;
        }
        const double area = std::numbers::pi * (radius * radius - radius_ * radius_);
        std::poisson_distribution<long> count(gamma_ * area);
        const long n = count(rng_);
        for (long a = 0; a < n; ++a) {
            const double rr = std::sqrt(radius_ * radius_ + rng_.uniform() * (radius * radius - radius_ * radius_));
            const double th = 2.0 * std::numbers::pi * rng_.uniform();
            points_.push_back({centre_.x + rr * std::cos(th), centre_.y + rr * std::sin(th)});
        }
        radius_ = radius;
    }

    double radius() const { return radius_; }
    Point2 centre() const { return centre_; }
    const std::vector<Point2>& points() const { return points_; }

  private:
    double gamma_;
    Point2 centre_;
    CounterStream rng_;
    double radius_ = 0.0;
    std::vector<Point2> points_;
};

/// Exact Voronoi cells of the given extra sites within η ∪ sites, η sampled
/// around `centre`.
std::vector<std::vector<Point2>> exact_cells(double gamma, const std::vector<Point2>& sites, Point2 centre,
                                             std::uint64_t key) {
    LocalPoisson eta(gamma, centre, key);
    double reach = 0.0;
    for (const auto& s : sites) {
        reach = std::max(reach, distance(s, centre));
    }
    double radius = reach + 3.0 / std::sqrt(gamma);
    for (int round = 0; round < 40; ++round) {
        eta.grow_to(radius);
        std::vector<Point2> all = eta.points();
        all.insert(all.end(), sites.begin(), sites.end());
        std::vector<std::vector<Point2>> cells;
        bool certified = true;
        for (const auto& s : sites) {
            auto cell = local_cell(s, all, 2.0 * radius);
            const double rho = max_radius(cell, s);
            if (cell.size() < 3 || distance(s, centre) + 2.0 * rho > radius) {
                certified = false;
                break;
            }
            cells.push_back(std::move(cell));
        }
        if (certified) {
            return cells;
        }
        radius *= 1.5;
    }
    throw TessellationError("local Voronoi cell not certified");
}

/// Star size |S_n(F)| of a k-face F of a cell with `f0` vertices in a normal
/// planar tessellation.
int normal_star_size(int n, int k, int f0) {
    static constexpr int table[3][3] = {
        {1, 3, 3},  // vertex: S_0, S_1, S_2
        {2, 1, 2},  // edge
        {0, 0, 1},  // cell: f0 vertices and f0 edges
    };
    if (k == 2 && n < 2) {
        return f0;
    }
    return table[k][n];
}

/// V_i^{(k)} of a cell: Σ over its k-faces of V_i(F) f_n^k(|S_n(F)|, p).
double cell_functional(const std::vector<Point2>& cell, int n, int i, int k, double p) {
    const int f0 = static_cast<int>(cell.size());
    const double f = f_poly(n, k, normal_star_size(n, k, f0), p);
    if (f == 0.0) {
        return 0.0;
    }
    if (k == 0) {
        return i == 0 ? f0 * f : 0.0;
    }
    if (k == 1) {
        if (i == 0) {
            return f0 * f;
        }
        if (i == 1) {
            return polygon_perimeter(cell) * f;
        }
        return 0.0;
    }
    if (i == 0) {
        return f;
    }
    if (i == 1) {
        return 0.5 * polygon_perimeter(cell) * f;
    }
    return polygon_signed_area(cell) * f;
}

}  // namespace

RhoResult estimate_rho_voronoi(int i, int j, int k, int l, double p, double gamma, const RhoParams& params) {
    if (i < 0 || i > 2 || j < 0 || j > 2 || k < 0 || k > 2 || l < 0 || l > 2) {
        throw std::invalid_argument("indices must lie in {0, 1, 2}");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("intensity must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("p must lie in [0, 1]");
    }
    const int n = params.mode_n;
    const int n1 = params.first_term_samples;
    const int nodes = params.radial_nodes;
    const int per_node = params.samples_per_node;
    if (n1 < 2 || nodes < 1 || per_node < 2) {
        throw std::invalid_argument("sample sizes too small");
    }
    const double r_trunc = params.r_trunc > 0.0 ? params.r_trunc : 6.0 / std::sqrt(gamma);

    std::vector<double> a(n1);
    std::vector<double> b(n1);
    parallel_for(n1, params.threads, [&](int s) {
        const auto cells = exact_cells(gamma, {{0.0, 0.0}}, {0.0, 0.0}, hash_key(params.seed, 0, s));
        a[s] = cell_functional(cells[0], n, i, k, p);
        b[s] = cell_functional(cells[0], n, j, l, p);
    });

    const double dr = r_trunc / nodes;
    std::vector<double> node_sum(nodes, 0.0);
    std::vector<double> node_sq(nodes, 0.0);
    std::vector<double> prod(static_cast<std::size_t>(nodes) * per_node);
    parallel_for(nodes * per_node, params.threads, [&](int s) {
        const int q = s / per_node;
        const double r = (q + 0.5) * dr;
        CounterStream dir(hash_key(params.seed, 1, s));
        const double th = 2.0 * std::numbers::pi * dir.uniform();
        const Point2 x{r * std::cos(th), r * std::sin(th)};
        const auto cells = exact_cells(gamma, {{0.0, 0.0}, x}, 0.5 * x, hash_key(params.seed, 2, s));
        // V_i^{(k)}(x, 0, p) uses the cell of x, V_j^{(l)}(0, x, p) the cell of 0.
        prod[s] = cell_functional(cells[1], n, i, k, p) * cell_functional(cells[0], n, j, l, p);
    });
    for (int q = 0; q < nodes; ++q) {
        for (int s = 0; s < per_node; ++s) {
            const double v = prod[static_cast<std::size_t>(q) * per_node + s];
            node_sum[q] += v;
            node_sq[q] += v * v;
        }
    }

    double ma = 0.0;
    double mb = 0.0;
    double mab = 0.0;
    for (int s = 0; s < n1; ++s) {
        ma += a[s];
        mb += b[s];
        mab += a[s] * b[s];
    }
    ma /= n1;
    mb /= n1;
    mab /= n1;
    // Sample covariance matrix of (ab, a, b).
    double c[3][3] = {};
    for (int s = 0; s < n1; ++s) {
        const double z[3] = {a[s] * b[s] - mab, a[s] - ma, b[s] - mb};
        for (int u = 0; u < 3; ++u) {
            for (int v = 0; v < 3; ++v) {
                c[u][v] += z[u] * z[v];
            }
        }
    }
    for (auto& row : c) {
        for (double& v : row) {
            v /= (n1 - 1);
        }
    }

    RhoResult res;
    double weight_sum = 0.0;
    double second = 0.0;
    double second_var = 0.0;
    double peak = 0.0;
    std::vector<double> node_se(nodes);
    for (int q = 0; q < nodes; ++q) {
        const double r = (q + 0.5) * dr;
        const double w = gamma * gamma * 2.0 * std::numbers::pi * r * dr;
        const double mean = node_sum[q] / per_node;
        const double var = std::max(0.0, (node_sq[q] - per_node * mean * mean) / (per_node - 1));
        weight_sum += w;
        second += w * mean;
        second_var += w * w * var / per_node;
        node_se[q] = std::sqrt(var / per_node);
        res.radii.push_back(r);
        res.integrand.push_back(mean - ma * mb);
        peak = std::max(peak, std::abs(mean - ma * mb));
    }
    second -= weight_sum * ma * mb;

    // Delta method for γ E[ab] - W E[a] E[b] from the single-cell samples.
    const double grad[3] = {gamma, -weight_sum * mb, -weight_sum * ma};
    double first_var = 0.0;
    double second_mean_var = 0.0;
    for (int u = 0; u < 3; ++u) {
        for (int v = 0; v < 3; ++v) {
            first_var += grad[u] * grad[v] * c[u][v];
            if (u > 0 && v > 0) {
                second_mean_var += grad[u] * grad[v] * c[u][v];
            }
        }
    }
    first_var /= n1;
    second_mean_var /= n1;

    const double scale = static_cast<double>((3 - k) * (3 - l));
    res.first_term = {gamma * mab, gamma * std::sqrt(c[0][0] / n1), n1};
    res.second_term = {second, std::sqrt(second_var + second_mean_var), static_cast<long>(nodes) * per_node};
    res.rho = {(gamma * mab + second) / scale, std::sqrt(first_var + second_var) / scale,
               static_cast<long>(n1) + static_cast<long>(nodes) * per_node};

    const double tail = std::abs(res.integrand.back());
    const double tail_se = std::hypot(node_se.back(), std::sqrt(c[1][1] * mb * mb + c[2][2] * ma * ma) / std::sqrt(n1));
    if (tail > 3.0 * tail_se && tail > 0.01 * peak) {
        throw AnalyticError("truncation unsafe");
    }
    return res;
}

}  // namespace faceperc
