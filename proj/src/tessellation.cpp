#include "faceperc/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace faceperc {

namespace {

const std::vector<LatticeInfo>& lattice_table() {
    static const std::vector<LatticeInfo> table{
        {LatticeCode::square_4444, "4.4.4.4", 4, {4, 4, 4, 4}},
        {LatticeCode::triangular_333333, "3.3.3.3.3.3", 6, {3, 3, 3, 3, 3, 3}},
        {LatticeCode::honeycomb_666, "6.6.6", 3, {6, 6, 6}},
        {LatticeCode::kagome_3636, "3.6.3.6", 4, {3, 6, 3, 6}},
    };
    return table;
}

std::array<double, 4> box_of(const std::vector<Point2>& pts) {
    std::array<double, 4> b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : pts) {
        b[0] = std::min(b[0], p.x);
        b[1] = std::min(b[1], p.y);
        b[2] = std::max(b[2], p.x);
        b[3] = std::max(b[3], p.y);
    }
    return b;
}

bool boxes_overlap(const std::array<double, 4>& a, const std::array<double, 4>& b, double eps = 0.0) {
    return a[0] <= b[2] + eps && b[0] <= a[2] + eps && a[1] <= b[3] + eps && b[1] <= a[3] + eps;
}

std::uint64_t edge_key(int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

}  // namespace

const LatticeInfo& lattice_info(LatticeCode code) {
    for (const auto& info : lattice_table()) {
        if (info.code == code) {
            return info;
        }
    }
    throw TessellationError("unsupported lattice code");
}

LatticeCode parse_lattice_code(std::string_view text) {
    std::string norm;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            norm.push_back(c);
        } else if (c == ',' || c == '.' || c == '-') {
            norm.push_back('.');
        }
    }
    for (const auto& info : lattice_table()) {
        if (norm == info.name) {
            return info.code;
        }
    }
    throw TessellationError("unsupported lattice code: " + std::string(text));
}

Model parse_model(std::string_view text) {
    if (text == "voronoi") {
        return Model::voronoi;
    }
    if (text == "archimedean" || text == "lattice") {
        return Model::archimedean;
    }
    if (text == "line") {
        return Model::line;
    }
    throw TessellationError("unknown model: " + std::string(text));
}

std::string to_string(Model m) {
    switch (m) {
    case Model::voronoi:
        return "voronoi";
    case Model::archimedean:
        return "archimedean";
    case Model::line:
        return "line";
    }
    return "unknown";
}

std::string to_string(LatticeCode c) { return lattice_info(c).name; }

double GeneratorConfig::effective_padding() const {
    if (padding) {
        return *padding;
    }
    switch (model) {
    case Model::voronoi:
        return 5.0 / std::sqrt(intensity);
    case Model::archimedean:
        return 4.0 * edge_length;
    case Model::line:
        return 10.0 / intensity;
    }
    return 0.0;
}

PlanarTessellation PlanarTessellation::assemble(std::vector<Point2> points, const std::vector<std::vector<int>>& cycles,
                                                Window core_region, std::array<double, 4> bounds, GeneratorTag tag,
                                                bool check_coverage, std::vector<Point2> sites) {
    PlanarTessellation t;
    t.core_ = std::move(core_region);
    t.bounds_ = bounds;
    t.tag_ = tag;
    if (!sites.empty() && sites.size() != cycles.size()) {
        throw TessellationError("sites must align with cells");
    }
    t.sites_ = std::move(sites);

    std::vector<int> remap(points.size(), -1);
    std::unordered_map<std::uint64_t, int> edge_ids;
    edge_ids.reserve(cycles.size() * 4);
    t.cells_.reserve(cycles.size());
    for (const auto& cycle : cycles) {
        if (cycle.size() < 3) {
            throw TessellationError("cell cycle shorter than three vertices");
        }
        Cell cell;
        for (int pid : cycle) {
            if (pid < 0 || static_cast<std::size_t>(pid) >= points.size()) {
                throw TessellationError("cell references unknown vertex");
            }
            if (remap[pid] < 0) {
                remap[pid] = static_cast<int>(t.vertices_.size());
                t.vertices_.push_back(points[pid]);
            }
            cell.vertices.push_back(remap[pid]);
        }
        const std::size_t n = cell.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const int a = cell.vertices[i];
            const int b = cell.vertices[(i + 1) % n];
            auto [it, inserted] = edge_ids.try_emplace(edge_key(a, b), static_cast<int>(t.edges_.size()));
            if (inserted) {
                t.edges_.push_back({std::min(a, b), std::max(a, b)});
            }
            cell.edges.push_back(it->second);
        }
        t.cells_.push_back(std::move(cell));
    }

    const std::size_t nv = t.vertices_.size();
    const std::size_t ne = t.edges_.size();
    const std::size_t nc = t.cells_.size();
    t.vertex_edges_.assign(nv, {});
    t.vertex_cells_.assign(nv, {});
    t.edge_cells_.assign(ne, {});
    for (std::size_t e = 0; e < ne; ++e) {
        t.vertex_edges_[t.edges_[e][0]].push_back(static_cast<int>(e));
        t.vertex_edges_[t.edges_[e][1]].push_back(static_cast<int>(e));
    }
    for (std::size_t c = 0; c < nc; ++c) {
        for (int v : t.cells_[c].vertices) {
            t.vertex_cells_[v].push_back(static_cast<int>(c));
        }
        for (int e : t.cells_[c].edges) {
            t.edge_cells_[e].push_back(static_cast<int>(c));
            if (t.edge_cells_[e].size() > 2) {
                throw TessellationError("edge shared by more than two cells");
            }
        }
    }

    for (int d = 0; d < 3; ++d) {
        const std::size_t n = t.count(d);
        t.steiner_[d].resize(n);
        t.volumes_[d].resize(n);
        t.boxes_[d].resize(n);
        t.complete_[d].assign(n, 0);
        t.trusted_[d].assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const FaceRef f{d, static_cast<int>(i)};
            const FaceGeometry g = t.geometry(f);
            t.steiner_[d][i] = steiner_point(g);
            t.volumes_[d][i] = intrinsic_volumes(g);
            t.boxes_[d][i] = box_of(g.vertices());
        }
    }
    for (std::size_t e = 0; e < ne; ++e) {
        t.complete_[1][e] = t.edge_cells_[e].size() == 2;
    }
    for (std::size_t v = 0; v < nv; ++v) {
        bool ok = !t.vertex_edges_[v].empty();
        for (int e : t.vertex_edges_[v]) {
            ok = ok && t.complete_[1][e];
        }
        t.complete_[0][v] = ok;
    }
    std::vector<std::uint8_t> cell_closed(nc, 1);
    for (std::size_t c = 0; c < nc; ++c) {
        t.complete_[2][c] = 1;
        for (int v : t.cells_[c].vertices) {
            cell_closed[c] = cell_closed[c] && t.complete_[0][v];
        }
        for (int e : t.cells_[c].edges) {
            cell_closed[c] = cell_closed[c] && t.complete_[1][e];
        }
    }
    auto all_closed = [&](const std::vector<int>& cells) {
        return std::all_of(cells.begin(), cells.end(), [&](int c) { return cell_closed[c] != 0; });
    };
    for (std::size_t v = 0; v < nv; ++v) {
        t.trusted_[0][v] = t.complete_[0][v] && all_closed(t.vertex_cells_[v]);
    }
    for (std::size_t e = 0; e < ne; ++e) {
        t.trusted_[1][e] = t.complete_[1][e] && all_closed(t.edge_cells_[e]);
    }
    for (std::size_t c = 0; c < nc; ++c) {
        t.trusted_[2][c] = cell_closed[c];
    }

    if (check_coverage) {
        for (int d = 0; d < 3; ++d) {
            for (std::size_t i = 0; i < t.count(d); ++i) {
                const FaceRef f{d, static_cast<int>(i)};
                if (!t.trusted(f) && t.meets(f, t.core_)) {
                    throw PaddingError();
                }
            }
        }
    }
    return t;
}

std::size_t PlanarTessellation::count(int dim) const {
    switch (dim) {
    case 0:
        return vertices_.size();
    case 1:
        return edges_.size();
    case 2:
        return cells_.size();
    default:
        throw TessellationError("face dimension out of range");
    }
}

FaceGeometry PlanarTessellation::geometry(FaceRef f) const {
    switch (f.dim) {
    case 0:
        return FaceGeometry::point(vertices_.at(f.index));
    case 1: {
        const auto& e = edges_.at(f.index);
        return FaceGeometry::segment(vertices_[e[0]], vertices_[e[1]]);
    }
    case 2: {
        std::vector<Point2> poly;
        for (int v : cells_.at(f.index).vertices) {
            poly.push_back(vertices_[v]);
        }
        return FaceGeometry::polygon(std::move(poly));
    }
    default:
        throw TessellationError("face dimension out of range");
    }
}

bool PlanarTessellation::meets(FaceRef f, const Window& w) const {
    if (!boxes_overlap(box(f), w.bounds())) {
        return false;
    }
    const auto& poly = w.polygon.vertices();
    switch (f.dim) {
    case 0:
        return point_in_convex(vertices_[f.index], poly);
    case 1: {
        const auto& e = edges_[f.index];
        return segment_intersects_convex(vertices_[e[0]], vertices_[e[1]], poly);
    }
    default: {
        std::vector<Point2> cell;
        for (int v : cells_[f.index].vertices) {
            cell.push_back(vertices_[v]);
        }
        return convex_intersects(cell, poly);
    }
    }
}

PlanarTessellation build_tessellation(const GeneratorConfig& cfg) {
    switch (cfg.model) {
    case Model::voronoi:
        return build_poisson_voronoi(cfg);
    case Model::archimedean:
        return build_archimedean(cfg);
    case Model::line:
        return build_poisson_line(cfg);
    }
    throw TessellationError("unknown model");
}

std::vector<FaceRef> subfaces(const PlanarTessellation& t, FaceRef f, int l) {
    std::vector<FaceRef> out;
    if (l >= f.dim) {
        return out;
    }
    if (f.dim == 1) {
        for (int v : t.edges()[f.index]) {
            out.push_back({0, v});
        }
    } else {
        const auto& cell = t.cells()[f.index];
        for (int id : (l == 0 ? cell.vertices : cell.edges)) {
            out.push_back({l, id});
        }
    }
    return out;
}

std::vector<FaceRef> face_star(const PlanarTessellation& t, FaceRef f, int l) {
    if (l < 0 || l > 2) {
        throw TessellationError("star dimension out of range");
    }
    if (l == f.dim) {
        return {f};
    }
    if (l < f.dim) {
        return subfaces(t, f, l);
    }
    if (!t.complete(f)) {
        throw TessellationError("star truncated");
    }
    std::vector<FaceRef> out;
    const auto& ids = f.dim == 0 ? (l == 1 ? t.vertex_edges(f.index) : t.vertex_cells(f.index))
                                 : t.edge_cells(f.index);
    for (int id : ids) {
        out.push_back({l, id});
    }
    return out;
}

std::vector<FaceRef> face_star_shared(const PlanarTessellation& t, FaceRef f, int l, int n, int m,
                                      std::optional<int> s) {
    if (!t.trusted(f)) {
        throw TessellationError("star truncated");
    }
    auto own = face_star(t, f, n);
    std::sort(own.begin(), own.end());
    std::vector<FaceRef> candidates;
    for (const auto& h : own) {
        auto star = face_star(t, h, l);
        candidates.insert(candidates.end(), star.begin(), star.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<FaceRef> out;
    for (const auto& g : candidates) {
        auto theirs = face_star(t, g, n);
        if (s && static_cast<int>(theirs.size()) != *s) {
            continue;
        }
        std::sort(theirs.begin(), theirs.end());
        std::vector<FaceRef> common;
        std::set_intersection(own.begin(), own.end(), theirs.begin(), theirs.end(), std::back_inserter(common));
        if (static_cast<int>(common.size()) == m) {
            out.push_back(g);
        }
    }
    return out;
}

FaceRef face_of_point(const PlanarTessellation& t, Point2 x) {
    if (!t.core_region().contains(x, kGeomEps)) {
        throw TessellationError("point outside core region");
    }
    for (std::size_t c = 0; c < t.cells().size(); ++c) {
        const FaceRef cell{2, static_cast<int>(c)};
        const auto& b = t.box(cell);
        if (x.x < b[0] - kGeomEps || x.x > b[2] + kGeomEps || x.y < b[1] - kGeomEps || x.y > b[3] + kGeomEps) {
            continue;
        }
        const auto geom = t.geometry(cell);
        if (!point_in_convex(x, geom.vertices(), kGeomEps)) {
            continue;
        }
        for (int v : t.cells()[c].vertices) {
            if (distance(t.vertices()[v], x) <= kGeomEps) {
                return {0, v};
            }
        }
        for (int e : t.cells()[c].edges) {
            const auto& ev = t.edges()[e];
            if (distance_point_segment(x, t.vertices()[ev[0]], t.vertices()[ev[1]]) <= kGeomEps) {
                return {1, e};
            }
        }
        return cell;
    }
    throw TessellationError("no face contains the point");
}

ValidationReport validate(const PlanarTessellation& t) {
    ValidationReport r;
    const std::size_t nc = t.cells().size();

    for (std::size_t c = 0; c < nc; ++c) {
        const auto& vs = t.cells()[c].vertices;
        const std::size_t n = vs.size();
        bool ok = polygon_signed_area([&] {
                      std::vector<Point2> p;
                      for (int v : vs) {
                          p.push_back(t.vertices()[v]);
                      }
                      return p;
                  }()) > 0.0;
        for (std::size_t i = 0; i < n && ok; ++i) {
            const Point2 a = t.vertices()[vs[(i + n - 1) % n]];
            const Point2 b = t.vertices()[vs[i]];
            const Point2 q = t.vertices()[vs[(i + 1) % n]];
            ok = orient(a, b, q) >= -kGeomEps * (distance(a, b) + distance(b, q));
        }
        if (!ok) {
            ++r.nonconvex_cells;
        }
    }
    r.convex = r.nonconvex_cells == 0;
    if (!r.convex) {
        r.failures.push_back("non-convex cells: " + std::to_string(r.nonconvex_cells));
    }

    // Face-to-face: sweep cells by xmin and inspect pairs with overlapping boxes.
    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return t.box({2, a})[0] < t.box({2, b})[0]; });
    for (std::size_t ia = 0; ia < nc; ++ia) {
        const int a = order[ia];
        const auto& ba = t.box({2, a});
        for (std::size_t ib = ia + 1; ib < nc; ++ib) {
            const int b = order[ib];
            const auto& bb = t.box({2, b});
            if (bb[0] > ba[2] + kGeomEps) {
                break;
            }
            if (!boxes_overlap(ba, bb, kGeomEps)) {
                continue;
            }
            auto va = t.cells()[a].vertices;
            auto vb = t.cells()[b].vertices;
            std::sort(va.begin(), va.end());
            std::sort(vb.begin(), vb.end());
            std::vector<int> shared;
            std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(shared));
            bool ok = true;
            const auto ga = t.geometry({2, a});
            const auto gb = t.geometry({2, b});
            if (shared.empty()) {
                ok = !convex_intersects(ga.vertices(), gb.vertices());
            } else if (shared.size() <= 2) {
                const auto overlap = clip_polygon(ga, Window{gb, 1.0});
                ok = !overlap || intrinsic_volumes(*overlap).v2 <= 1e-9;
                if (ok && shared.size() == 2) {
                    auto ea = t.cells()[a].edges;
                    auto eb = t.cells()[b].edges;
                    std::sort(ea.begin(), ea.end());
                    std::sort(eb.begin(), eb.end());
                    std::vector<int> common;
                    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(common));
                    ok = common.size() == 1;
                }
            } else {
                ok = false;
            }
            if (!ok) {
                ++r.face_to_face_violations;
            }
        }
    }
    r.face_to_face = r.face_to_face_violations == 0;
    if (!r.face_to_face) {
        r.failures.push_back("face-to-face violations: " + std::to_string(r.face_to_face_violations));
    }

    for (std::size_t v = 0; v < t.count(0); ++v) {
        if (!t.complete({0, static_cast<int>(v)})) {
            continue;
        }
        ++r.degree_histogram[static_cast<int>(t.vertex_edges(static_cast<int>(v)).size())];
        if (t.vertex_cells(static_cast<int>(v)).size() != 3) {
            r.normal = false;
        }
    }

    const Window& w = t.core_region();
    const auto& wpoly = w.polygon.vertices();
    bool generic = true;
    for (std::size_t v = 0; v < t.count(0); ++v) {
        const Point2 p = t.vertices()[v];
        for (std::size_t i = 0; i < wpoly.size(); ++i) {
            if (distance_point_segment(p, wpoly[i], wpoly[(i + 1) % wpoly.size()]) <= kGeomEps) {
                generic = false;
            }
        }
    }
    for (int d = 0; d < 3; ++d) {
        for (std::size_t i = 0; i < t.count(d); ++i) {
            const FaceRef f{d, static_cast<int>(i)};
            if (!t.meets(f, w)) {
                continue;
            }
            ++r.faces_in_window[d];
            if (d == 1) {
                r.boundary_crossings += clip_segment(t.geometry(f), w).boundary_hits;
            }
        }
    }
    const long x0 = r.faces_in_window[0];
    const long x1 = r.faces_in_window[1];
    const long x2 = r.faces_in_window[2];
    const long eps = r.boundary_crossings;
    r.euler_vertices_identity = x0 == 2 * x2 - eps - 2;
    r.euler_edges_identity = x1 == 3 * x2 - eps - 3;
    if (r.normal && generic) {
        if (!r.euler_vertices_identity) {
            r.failures.push_back("vertex count identity |X0| = 2|X2| - eps - 2 violated");
        }
        if (!r.euler_edges_identity) {
            r.failures.push_back("edge count identity |X1| = 3|X2| - eps - 3 violated");
        }
    }
    return r;
}

}  // namespace faceperc
