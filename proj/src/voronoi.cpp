#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "faceperc/rng.hpp"
#include "faceperc/tessellation.hpp"

namespace faceperc {

namespace {

// Incremental Bowyer-Watson triangulation. nb[i] is the triangle across the
// edge opposite v[i].
class Delaunay {
  public:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nb;
        bool alive = true;
    };

    explicit Delaunay(const std::vector<Point2>& sites) : pts_(sites) {
        const auto box = bounding(sites);
        const double cx = 0.5 * (box[0] + box[2]);
        const double cy = 0.5 * (box[1] + box[3]);
        const double span = std::max({box[2] - box[0], box[3] - box[1], 1.0}) * 100.0;
        super_ = static_cast<int>(pts_.size());
        pts_.push_back({cx - 2.0 * span, cy - span});
        pts_.push_back({cx + 2.0 * span, cy - span});
        pts_.push_back({cx, cy + 2.0 * span});
        tris_.push_back({{super_, super_ + 1, super_ + 2}, {-1, -1, -1}, true});
        vertex_tri_.assign(pts_.size(), -1);
        for (int k = 0; k < 3; ++k) {
            vertex_tri_[super_ + k] = 0;
        }
        for (int idx : insertion_order(sites)) {
            insert(idx);
        }
    }

    const std::vector<Tri>& triangles() const { return tris_; }
    const std::vector<Point2>& points() const { return pts_; }
    bool is_super(int v) const { return v >= super_; }
    int vertex_triangle(int v) const { return vertex_tri_[v]; }

    static int index_of(const Tri& t, int v) {
        for (int i = 0; i < 3; ++i) {
            if (t.v[i] == v) {
                return i;
            }
        }
        return -1;
    }

  private:
    static std::array<double, 4> bounding(const std::vector<Point2>& pts) {
        std::array<double, 4> b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
        for (const auto& p : pts) {
            b[0] = std::min(b[0], p.x);
            b[1] = std::min(b[1], p.y);
            b[2] = std::max(b[2], p.x);
            b[3] = std::max(b[3], p.y);
        }
        return b;
    }

    // Snake order over a coarse grid keeps point-location walks short.
    static std::vector<int> insertion_order(const std::vector<Point2>& pts) {
        const auto b = bounding(pts);
        const int g = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size()) / 4.0)));
        const double wx = std::max(b[2] - b[0], 1e-300);
        const double wy = std::max(b[3] - b[1], 1e-300);
        std::vector<std::pair<long, int>> keyed;
        keyed.reserve(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const int gx = std::min(g - 1, static_cast<int>((pts[i].x - b[0]) / wx * g));
            const int gy = std::min(g - 1, static_cast<int>((pts[i].y - b[1]) / wy * g));
            const int col = gy % 2 == 0 ? gx : g - 1 - gx;
            keyed.emplace_back(static_cast<long>(gy) * g + col, static_cast<int>(i));
        }
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<int> order;
        order.reserve(keyed.size());
        for (const auto& kv : keyed) {
            order.push_back(kv.second);
        }
        return order;
    }

    double incircle(const Tri& t, Point2 d) const {
        const Point2 a = pts_[t.v[0]] - d;
        const Point2 b = pts_[t.v[1]] - d;
        const Point2 c = pts_[t.v[2]] - d;
        const double a2 = dot(a, a);
        const double b2 = dot(b, b);
        const double c2 = dot(c, c);
        return a2 * cross(b, c) - b2 * cross(a, c) + c2 * cross(a, b);
    }

    int locate(Point2 p) const {
        int cur = last_;
        if (cur < 0 || !tris_[cur].alive) {
            cur = static_cast<int>(tris_.size()) - 1;
            while (!tris_[cur].alive) {
                --cur;
            }
        }
        for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
            const Tri& t = tris_[cur];
            int next = -1;
            for (int i = 0; i < 3; ++i) {
                if (orient(pts_[t.v[(i + 1) % 3]], pts_[t.v[(i + 2) % 3]], p) < 0.0) {
                    next = t.nb[i];
                    break;
                }
            }
            if (next < 0) {
                return cur;
            }
            cur = next;
        }
        throw TessellationError("point location failed");
    }

    void insert(int idx) {
        const Point2 p = pts_[idx];
        const int start = locate(p);
        std::vector<int> cavity{start};
        std::vector<char> in_cavity(tris_.size(), 0);
        in_cavity[start] = 1;
        for (std::size_t q = 0; q < cavity.size(); ++q) {
            const Tri& t = tris_[cavity[q]];
            for (int nb : t.nb) {
                if (nb >= 0 && !in_cavity[nb] && incircle(tris_[nb], p) > 0.0) {
                    in_cavity[nb] = 1;
                    cavity.push_back(nb);
                }
            }
        }

        struct Boundary {
            int a, b, outside;
        };
        std::vector<Boundary> rim;
        for (int c : cavity) {
            const Tri& t = tris_[c];
            for (int i = 0; i < 3; ++i) {
                const int nb = t.nb[i];
                if (nb < 0 || !in_cavity[nb]) {
                    rim.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], nb});
                }
            }
        }
        for (int c : cavity) {
            tris_[c].alive = false;
        }

        std::vector<int> created;
        created.reserve(rim.size());
        for (const auto& e : rim) {
            const int id = static_cast<int>(tris_.size());
            tris_.push_back(Tri{{e.a, e.b, idx}, {-1, -1, e.outside}, true});
            if (e.outside >= 0) {
                Tri& o = tris_[e.outside];
                for (int i = 0; i < 3; ++i) {
                    if (o.v[(i + 1) % 3] == e.b && o.v[(i + 2) % 3] == e.a) {
                        o.nb[i] = id;
                    }
                }
            }
            created.push_back(id);
        }
        // Link the fan: triangle (a, b, p) meets (b, c, p) across (b, p) and
        // (x, a, p) across (p, a).
        std::vector<std::pair<int, int>> by_start;
        by_start.reserve(created.size());
        for (int id : created) {
            by_start.emplace_back(tris_[id].v[0], id);
        }
        std::sort(by_start.begin(), by_start.end());
        auto find_start = [&](int v) {
            auto it = std::lower_bound(by_start.begin(), by_start.end(), std::make_pair(v, -1));
            if (it == by_start.end() || it->first != v) {
                throw TessellationError("cavity boundary is not a simple cycle");
            }
            return it->second;
        };
        for (int id : created) {
            Tri& t = tris_[id];
            const int after = find_start(t.v[1]);
            t.nb[0] = after;
            tris_[after].nb[1] = id;
        }
        for (int id : created) {
            for (int k = 0; k < 3; ++k) {
                vertex_tri_[tris_[id].v[k]] = id;
            }
        }
        last_ = created.front();
    }

    std::vector<Point2> pts_;
    std::vector<Tri> tris_;
    std::vector<int> vertex_tri_;
    int super_ = 0;
    int last_ = -1;
};

Point2 circumcenter(Point2 a, Point2 b, Point2 c) {
    const Point2 ab = b - a;
    const Point2 ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double ab2 = dot(ab, ab);
    const double ac2 = dot(ac, ac);
    return a + Point2{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

PlanarTessellation build_voronoi_from_sites(const std::vector<Point2>& sites, std::array<double, 4> bounds,
                                            const Window& core_region, bool check_coverage) {
    if (sites.size() < 3) {
        throw TessellationError("degenerate sample: fewer than 3 points");
    }
    const Delaunay dt(sites);
    const auto& tris = dt.triangles();
    const auto& pts = dt.points();
    const std::size_t nt = tris.size();

    std::vector<Point2> centers(nt);
    std::vector<char> certified(nt, 0);
    const double scale = std::max(bounds[2] - bounds[0], bounds[3] - bounds[1]);
    for (std::size_t i = 0; i < nt; ++i) {
        const auto& t = tris[i];
        if (!t.alive || dt.is_super(t.v[0]) || dt.is_super(t.v[1]) || dt.is_super(t.v[2])) {
            continue;
        }
        const Point2 c = circumcenter(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]]);
        const double r = distance(c, pts[t.v[0]]);
        centers[i] = c;
        certified[i] = c.x - r >= bounds[0] && c.x + r <= bounds[2] && c.y - r >= bounds[1] && c.y + r <= bounds[3];
    }

    // Cocircular sites give adjacent triangles with one circumcentre; they
    // collapse to a single Voronoi vertex.
    std::vector<int> parent(nt);
    std::iota(parent.begin(), parent.end(), 0);
    const double merge_tol = 1e-12 * std::max(scale, 1.0);
    for (std::size_t i = 0; i < nt; ++i) {
        if (!certified[i]) {
            continue;
        }
        for (int nb : tris[i].nb) {
            if (nb >= 0 && certified[nb] && distance(centers[i], centers[nb]) <= merge_tol) {
                const int a = find_root(parent, static_cast<int>(i));
                const int b = find_root(parent, nb);
                if (a != b) {
                    parent[std::max(a, b)] = std::min(a, b);
                }
            }
        }
    }

    std::vector<std::vector<int>> cycles;
    std::vector<Point2> kept_sites;
    for (std::size_t s = 0; s < sites.size(); ++s) {
        const int v = static_cast<int>(s);
        const int first = dt.vertex_triangle(v);
        std::vector<int> ring;
        bool ok = first >= 0;
        int cur = first;
        for (std::size_t guard = 0; ok; ++guard) {
            if (cur < 0 || !certified[cur] || guard > nt) {
                ok = false;
                break;
            }
            ring.push_back(cur);
            const auto& t = tris[cur];
            cur = t.nb[(Delaunay::index_of(t, v) + 1) % 3];
            if (cur == first) {
                break;
            }
        }
        if (!ok) {
            continue;
        }
        std::vector<int> cycle;
        for (int tri : ring) {
            const int root = find_root(parent, tri);
            if (cycle.empty() || cycle.back() != root) {
                cycle.push_back(root);
            }
        }
        while (cycle.size() > 1 && cycle.front() == cycle.back()) {
            cycle.pop_back();
        }
        if (cycle.size() < 3) {
            continue;
        }
        cycles.push_back(std::move(cycle));
        kept_sites.push_back(sites[s]);
    }
    if (cycles.empty()) {
        throw TessellationError("degenerate sample: no exact Voronoi cell");
    }
    return PlanarTessellation::assemble(std::move(centers), cycles, core_region, bounds,
                                        GeneratorTag{Model::voronoi, LatticeCode::square_4444}, check_coverage,
                                        std::move(kept_sites));
}

PlanarTessellation build_poisson_voronoi(const GeneratorConfig& cfg) {
    if (cfg.model != Model::voronoi) {
        throw TessellationError("config model is not voronoi");
    }
    if (!(cfg.intensity > 0.0)) {
        throw TessellationError("intensity must be positive");
    }
    const auto core = cfg.region.bounds();
    const double pad0 = cfg.effective_padding();
    const int rounds = cfg.padding ? 1 : GeneratorConfig::kMaxPaddingGrowth;

    // Each round samples the Poisson process on a wider box, keeping the
    // points already drawn and adding an independent sample of the new ring.
    std::vector<Point2> sites;
    std::array<double, 4> prev{};
    for (int k = 0; k < rounds; ++k) {
        const double pad = pad0 * (1.0 + 0.5 * k);
        const std::array<double, 4> b{core[0] - pad, core[1] - pad, core[2] + pad, core[3] + pad};
        CounterStream rng(hash_key(cfg.seed, 0x766f726f6e6f69ULL, static_cast<std::uint64_t>(k)));
        std::poisson_distribution<long> count(cfg.intensity * (b[2] - b[0]) * (b[3] - b[1]));
        const long n = count(rng);
        for (long i = 0; i < n; ++i) {
            const Point2 x{rng.uniform(b[0], b[2]), rng.uniform(b[1], b[3])};
            const bool seen = k > 0 && x.x >= prev[0] && x.x < prev[2] && x.y >= prev[1] && x.y < prev[3];
            if (!seen) {
                sites.push_back(x);
            }
        }
        prev = b;
        try {
            return build_voronoi_from_sites(sites, b, cfg.region, true);
        } catch (const PaddingError&) {
            if (k + 1 == rounds) {
                throw;
            }
        }
    }
    throw PaddingError();
}

}  // namespace faceperc
