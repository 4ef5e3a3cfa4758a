#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "faceperc/rng.hpp"
#include "faceperc/tessellation.hpp"

namespace faceperc {

namespace {

struct Line {
    Point2 normal;
    double offset;  // normal . x == offset
};

PlanarTessellation arrange(const std::vector<Line>& lines, std::array<double, 4> b, const Window& core);

}  // namespace

PlanarTessellation build_poisson_line(const GeneratorConfig& cfg) {
    if (cfg.model != Model::line) {
        throw TessellationError("config model is not line");
    }
    if (!(cfg.intensity > 0.0)) {
        throw TessellationError("intensity must be positive");
    }
    const auto core = cfg.region.bounds();
    const Point2 c{0.5 * (core[0] + core[2]), 0.5 * (core[1] + core[3])};
    const double pad0 = cfg.effective_padding();
    const int rounds = cfg.padding ? 1 : GeneratorConfig::kMaxPaddingGrowth;

    // Lines are parameterised by signed distance r from c and direction
    // theta; a round adds the independent lines with prev_radius < |r| <= radius.
    std::vector<Line> lines;
    double prev_radius = 0.0;
    // Nearly parallel lines can meet far away, so the margin doubles per round.
    for (int k = 0; k < rounds; ++k) {
        const double pad = pad0 * std::ldexp(1.0, k);
        const std::array<double, 4> b{core[0] - pad, core[1] - pad, core[2] + pad, core[3] + pad};
        const double radius = 0.5 * std::hypot(b[2] - b[0], b[3] - b[1]);
        CounterStream rng(hash_key(cfg.seed, 0x6c696e6573ULL, static_cast<std::uint64_t>(k)));
        std::poisson_distribution<long> count(cfg.intensity * 2.0 * radius);
        const long n = count(rng);
        for (long i = 0; i < n; ++i) {
            const double r = rng.uniform(-radius, radius);
            const double theta = rng.uniform(0.0, std::numbers::pi);
            if (std::abs(r) <= prev_radius) {
                continue;
            }
            const Point2 nrm{std::cos(theta), std::sin(theta)};
            lines.push_back({nrm, r + dot(nrm, c)});
        }
        prev_radius = radius;
        if (lines.empty()) {
            if (k + 1 == rounds) {
                throw TessellationError("degenerate sample: zero lines");
            }
            continue;
        }
        try {
            return arrange(lines, b, cfg.region);
        } catch (const PaddingError&) {
            if (k + 1 == rounds) {
                throw;
            }
        }
    }
    throw PaddingError();
}

namespace {

PlanarTessellation arrange(const std::vector<Line>& lines, std::array<double, 4> b, const Window& core) {
    auto inside = [&](Point2 p) { return p.x > b[0] && p.x < b[2] && p.y > b[1] && p.y < b[3]; };

    // Intersections strictly inside the box, recorded per line with their
    // coordinate along the line direction.
    std::vector<Point2> points;
    std::vector<std::vector<std::pair<double, int>>> on_line(lines.size());
    for (std::size_t a = 0; a < lines.size(); ++a) {
        for (std::size_t q = a + 1; q < lines.size(); ++q) {
            const double det = cross(lines[a].normal, lines[q].normal);
            if (std::abs(det) < 1e-14) {
                continue;
            }
            const Point2 x{(lines[a].offset * lines[q].normal.y - lines[q].offset * lines[a].normal.y) / det,
                           (lines[a].normal.x * lines[q].offset - lines[q].normal.x * lines[a].offset) / det};
            if (!inside(x)) {
                continue;
            }
            const int id = static_cast<int>(points.size());
            points.push_back(x);
            for (std::size_t which : {a, q}) {
                const Point2 dir{-lines[which].normal.y, lines[which].normal.x};
                on_line[which].emplace_back(dot(x, dir), id);
            }
        }
    }

    // Undirected edges between consecutive intersections; outgoing
    // half-edges per vertex sorted counter-clockwise by angle.
    std::vector<std::vector<std::pair<double, int>>> out(points.size());
    for (auto& seq : on_line) {
        std::sort(seq.begin(), seq.end());
        for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
            const int u = seq[k].second;
            const int v = seq[k + 1].second;
            const Point2 d = points[v] - points[u];
            out[u].emplace_back(std::atan2(d.y, d.x), v);
            out[v].emplace_back(std::atan2(-d.y, -d.x), u);
        }
    }
    for (auto& o : out) {
        std::sort(o.begin(), o.end());
    }
    auto slot = [&](int from, int to) {
        const auto& o = out[from];
        for (std::size_t k = 0; k < o.size(); ++k) {
            if (o[k].second == to) {
                return k;
            }
        }
        throw TessellationError("half-edge lookup failed");
    };

    // Trace faces keeping each on the left: after arriving at v from u, leave
    // along the half-edge immediately clockwise of v->u.
    std::vector<std::vector<std::uint8_t>> used(points.size());
    for (std::size_t u = 0; u < points.size(); ++u) {
        used[u].assign(out[u].size(), 0);
    }
    std::vector<std::vector<int>> cycles;
    for (std::size_t u0 = 0; u0 < points.size(); ++u0) {
        for (std::size_t k0 = 0; k0 < out[u0].size(); ++k0) {
            if (used[u0][k0]) {
                continue;
            }
            std::vector<int> cycle;
            int u = static_cast<int>(u0);
            std::size_t k = k0;
            bool full = true;
            while (!used[u][k]) {
                used[u][k] = 1;
                cycle.push_back(u);
                full = full && out[u].size() == 4;
                const int v = out[u][k].second;
                const std::size_t back = slot(v, u);
                const std::size_t deg = out[v].size();
                k = (back + deg - 1) % deg;
                u = v;
            }
            if (!full || cycle.size() < 3) {
                continue;
            }
            std::vector<Point2> poly;
            for (int id : cycle) {
                poly.push_back(points[id]);
            }
            if (polygon_signed_area(poly) > 0.0) {
                cycles.push_back(std::move(cycle));
            }
        }
    }
    if (cycles.empty()) {
        throw TessellationError("line sample holds no complete cell");
    }
    return PlanarTessellation::assemble(std::move(points), cycles, core, b,
                                        GeneratorTag{Model::line, LatticeCode::square_4444}, true);
}

}  // namespace

}  // namespace faceperc
