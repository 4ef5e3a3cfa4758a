#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "faceperc/rng.hpp"
#include "faceperc/tessellation.hpp"

namespace faceperc {

namespace {

struct SiteKey {
    int i, j, sub;
    auto operator<=>(const SiteKey&) const = default;
};

struct LatticeSpec {
    Point2 a1, a2;
    std::vector<Point2> offsets;                 // sublattice positions
    std::vector<std::vector<SiteKey>> templates; // cells of one fundamental domain, CCW
};

LatticeSpec spec_for(LatticeCode code) {
    const double r3 = std::sqrt(3.0);
    switch (code) {
    case LatticeCode::square_4444:
        return {{1.0, 0.0}, {0.0, 1.0}, {{0.0, 0.0}}, {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}}};
    case LatticeCode::triangular_333333:
        return {{1.0, 0.0},
                {0.5, 0.5 * r3},
                {{0.0, 0.0}},
                {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{1, 0, 0}, {1, 1, 0}, {0, 1, 0}}}};
    case LatticeCode::honeycomb_666:
        return {{r3, 0.0},
                {0.5 * r3, 1.5},
                {{0.0, 1.0}, {0.0, -1.0}},
                {{{0, 1, 1}, {0, 0, 0}, {-1, 1, 1}, {0, -1, 0}, {0, 0, 1}, {1, -1, 0}}}};
    case LatticeCode::kagome_3636:
        return {{2.0, 0.0},
                {1.0, r3},
                {{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5 * r3}},
                {{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}},
                 {{0, 0, 1}, {1, -1, 2}, {1, 0, 0}},
                 {{0, 0, 1}, {1, 0, 0}, {1, 0, 2}, {0, 1, 1}, {0, 1, 0}, {0, 0, 2}}}};
    }
    throw TessellationError("unsupported lattice code");
}

}  // namespace

PlanarTessellation build_archimedean(const GeneratorConfig& cfg) {
    if (cfg.model != Model::archimedean) {
        throw TessellationError("config model is not archimedean");
    }
    if (!(cfg.edge_length > 0.0)) {
        throw TessellationError("edge length must be positive");
    }
    const LatticeSpec spec = spec_for(cfg.lattice_code);
    const double s = cfg.edge_length;
    const Point2 a1 = s * spec.a1;
    const Point2 a2 = s * spec.a2;

    CounterStream rng(hash_key(cfg.seed, 0x6c617474696365ULL));
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const Point2 shift = u1 * a1 + u2 * a2;

    const double pad = cfg.effective_padding();
    auto b = cfg.region.bounds();
    b = {b[0] - pad, b[1] - pad, b[2] + pad, b[3] + pad};

    // Lattice coordinates (i, j) of the box corners bound the index range.
    const double det = cross(a1, a2);
    double imin = 1e300, imax = -1e300, jmin = 1e300, jmax = -1e300;
    for (const Point2 c : {Point2{b[0], b[1]}, Point2{b[2], b[1]}, Point2{b[2], b[3]}, Point2{b[0], b[3]}}) {
        const Point2 q = c - shift;
        const double ci = cross(q, a2) / det;
        const double cj = cross(a1, q) / det;
        imin = std::min(imin, ci);
        imax = std::max(imax, ci);
        jmin = std::min(jmin, cj);
        jmax = std::max(jmax, cj);
    }
    const int i0 = static_cast<int>(std::floor(imin)) - 2;
    const int i1 = static_cast<int>(std::ceil(imax)) + 2;
    const int j0 = static_cast<int>(std::floor(jmin)) - 2;
    const int j1 = static_cast<int>(std::ceil(jmax)) + 2;

    auto position = [&](const SiteKey& k) {
        return shift + static_cast<double>(k.i) * a1 + static_cast<double>(k.j) * a2 + s * spec.offsets[k.sub];
    };
    auto inside = [&](Point2 p) { return p.x >= b[0] && p.x <= b[2] && p.y >= b[1] && p.y <= b[3]; };

    std::map<SiteKey, int> ids;
    std::vector<Point2> points;
    std::vector<std::vector<int>> cycles;
    for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
            for (const auto& tpl : spec.templates) {
                std::vector<SiteKey> keys;
                bool ok = true;
                for (const auto& k : tpl) {
                    const SiteKey key{k.i + i, k.j + j, k.sub};
                    ok = ok && inside(position(key));
                    keys.push_back(key);
                }
                if (!ok) {
                    continue;
                }
                std::vector<int> cycle;
                for (const auto& key : keys) {
                    auto [it, inserted] = ids.try_emplace(key, static_cast<int>(points.size()));
                    if (inserted) {
                        points.push_back(position(key));
                    }
                    cycle.push_back(it->second);
                }
                cycles.push_back(std::move(cycle));
            }
        }
    }
    if (cycles.empty()) {
        throw TessellationError("lattice region holds no complete cell");
    }
    return PlanarTessellation::assemble(std::move(points), cycles, cfg.region, b,
                                        GeneratorTag{Model::archimedean, cfg.lattice_code}, true);
}

}  // namespace faceperc
