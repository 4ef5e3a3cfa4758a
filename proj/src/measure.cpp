#include "faceperc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "faceperc/rng.hpp"

namespace faceperc {

namespace {

bool box_meets(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return a[0] <= b[2] && b[0] <= a[2] && a[1] <= b[3] && b[1] <= a[3];
}

std::vector<Point2> cell_polygon(const PlanarTessellation& t, int c) {
    std::vector<Point2> poly;
    for (int v : t.cells()[c].vertices) {
        poly.push_back(t.vertices()[v]);
    }
    return poly;
}

// Proper crossing of segments (a, b) and (p, q).
bool segments_cross(Point2 a, Point2 b, Point2 p, Point2 q) {
    const double d1 = orient(a, b, p);
    const double d2 = orient(a, b, q);
    const double d3 = orient(p, q, a);
    const double d4 = orient(p, q, b);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

bool window_is_generic(const PlanarTessellation& t, const Window& w) {
    const auto& wp = w.polygon.vertices();
    const std::size_t m = wp.size();
    auto wb = w.bounds();
    wb = {wb[0] - kGeomEps, wb[1] - kGeomEps, wb[2] + kGeomEps, wb[3] + kGeomEps};
    for (std::size_t v = 0; v < t.count(0); ++v) {
        const Point2 x = t.vertices()[v];
        if (x.x < wb[0] || x.x > wb[2] || x.y < wb[1] || x.y > wb[3]) {
            continue;
        }
        for (std::size_t s = 0; s < m; ++s) {
            if (distance_point_segment(x, wp[s], wp[(s + 1) % m]) <= kGeomEps) {
                return false;
            }
        }
    }
    for (std::size_t e = 0; e < t.count(1); ++e) {
        const auto& b = t.box({1, static_cast<int>(e)});
        const auto& ev = t.edges()[e];
        for (const auto& corner : wp) {
            if (corner.x < b[0] - kGeomEps || corner.x > b[2] + kGeomEps || corner.y < b[1] - kGeomEps ||
                corner.y > b[3] + kGeomEps) {
                continue;
            }
            if (distance_point_segment(corner, t.vertices()[ev[0]], t.vertices()[ev[1]]) <= kGeomEps) {
                return false;
            }
        }
    }
    return true;
}

Window generic_window(const PlanarTessellation& t, const Window& w, std::uint64_t seed) {
    if (window_is_generic(t, w)) {
        return w;
    }
    CounterStream rng(hash_key(seed, 0x6a6974746572ULL));
    const double scale = 1e3 * kGeomEps * std::max(1.0, std::sqrt(w.area()));
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Point2 shift{rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
        Window moved = w.translated(shift);
        if (window_is_generic(t, moved)) {
            return moved;
        }
    }
    throw MeasureError("could not move the window off tessellation vertices");
}

void require_in_core(const PlanarTessellation& t, const Window& w) {
    for (const auto& p : w.polygon.vertices()) {
        if (!t.core_region().contains(p, 1e-6)) {
            throw MeasureError("window not in core region");
        }
    }
}

std::array<double, 3> volumes_black_interior(const PlanarTessellation& t, const Coloring& c, const Window& w0) {
    require_in_core(t, w0);
    const Window w = generic_window(t, w0);
    const auto wb = w.bounds();
    const auto& wp = w.polygon.vertices();
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (std::size_t v = 0; v < t.count(0); ++v) {
        if (c.black[0][v] && w.contains(t.vertices()[v])) {
            out[0] += 1.0;
        }
    }
    for (std::size_t e = 0; e < t.count(1); ++e) {
        if (!c.black[1][e] || !box_meets(t.box({1, static_cast<int>(e)}), wb)) {
            continue;
        }
        const Point2 a = t.vertices()[t.edges()[e][0]];
        const Point2 b = t.vertices()[t.edges()[e][1]];
        const auto range = clip_segment_param(a, b, wp);
        if (range) {
            out[0] -= 1.0;
            out[1] += ((*range)[1] - (*range)[0]) * distance(a, b);
        }
    }
    for (std::size_t k = 0; k < t.count(2); ++k) {
        const FaceRef f{2, static_cast<int>(k)};
        if (!c.black[2][k] || !box_meets(t.box(f), wb)) {
            continue;
        }
        const auto piece = clip_polygon(t.geometry(f), w);
        if (piece) {
            const auto vol = intrinsic_volumes(*piece);
            out[0] += 1.0;
            out[1] -= vol.v1;
            out[2] += vol.v2;
        }
    }
    return out;
}

std::array<double, 3> volumes_black_boundary(const PlanarTessellation& t, const Coloring& c, const Window& w0) {
    require_in_core(t, w0);
    const Window w = generic_window(t, w0);
    const auto& wp = w.polygon.vertices();
    const std::size_t m = wp.size();
    std::array<double, 3> out{0.0, 0.0, 0.0};

    for (const auto& corner : wp) {
        for (std::size_t k = 0; k < t.count(2); ++k) {
            const FaceRef f{2, static_cast<int>(k)};
            const auto& b = t.box(f);
            if (corner.x < b[0] || corner.x > b[2] || corner.y < b[1] || corner.y > b[3]) {
                continue;
            }
            if (point_in_convex(corner, cell_polygon(t, f.index))) {
                out[0] += c.black[2][k] ? 1.0 : 0.0;
                break;
            }
        }
    }
    for (std::size_t s = 0; s < m; ++s) {
        const Point2 a = wp[s];
        const Point2 b = wp[(s + 1) % m];
        const std::array<double, 4> sb{std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
                                       std::max(a.y, b.y)};
        for (std::size_t k = 0; k < t.count(2); ++k) {
            const FaceRef f{2, static_cast<int>(k)};
            if (!c.black[2][k] || !box_meets(t.box(f), sb)) {
                continue;
            }
            const auto range = clip_segment_param(a, b, cell_polygon(t, f.index));
            if (range) {
                out[0] -= 1.0;
                out[1] += ((*range)[1] - (*range)[0]) * distance(a, b);
            }
        }
        for (std::size_t e = 0; e < t.count(1); ++e) {
            if (!c.black[1][e] || !box_meets(t.box({1, static_cast<int>(e)}), sb)) {
                continue;
            }
            if (segments_cross(a, b, t.vertices()[t.edges()[e][0]], t.vertices()[t.edges()[e][1]])) {
                out[0] += 1.0;
            }
        }
    }
    return out;
}

std::array<double, 3> volumes_black_closed(const PlanarTessellation& t, const Coloring& c, const Window& w) {
    const auto in = volumes_black_interior(t, c, w);
    const auto bd = volumes_black_boundary(t, c, w);
    return {in[0] + bd[0], in[1] + bd[1], in[2] + bd[2]};
}

double vi_black_interior(const PlanarTessellation& t, const Coloring& c, const Window& w, int i) {
    return volumes_black_interior(t, c, w).at(static_cast<std::size_t>(i));
}

double vi_black_boundary(const PlanarTessellation& t, const Coloring& c, const Window& w, int i) {
    return volumes_black_boundary(t, c, w).at(static_cast<std::size_t>(i));
}

std::array<double, 3> volumes_black_steiner(const PlanarTessellation& t, const Coloring& c, const Window& w) {
    require_in_core(t, w);
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t idx = 0; idx < t.count(k); ++idx) {
            const FaceRef f{k, static_cast<int>(idx)};
            if (!c.black[k][idx] || !w.contains(t.steiner(f))) {
                continue;
            }
            const auto& vol = t.volumes(f);
            out[0] += sign * vol.v0;
            out[1] -= sign * vol.v1;
            out[2] += sign * vol.v2;
        }
    }
    return out;
}

std::array<std::array<double, 3>, 3> face_sums_clipped(const PlanarTessellation& t, const Window& w0) {
    require_in_core(t, w0);
    const Window w = generic_window(t, w0);
    const auto wb = w.bounds();
    std::array<std::array<double, 3>, 3> out{};
    for (std::size_t v = 0; v < t.count(0); ++v) {
        if (w.contains(t.vertices()[v])) {
            out[0][0] += 1.0;
        }
    }
    for (std::size_t e = 0; e < t.count(1); ++e) {
        if (!box_meets(t.box({1, static_cast<int>(e)}), wb)) {
            continue;
        }
        const Point2 a = t.vertices()[t.edges()[e][0]];
        const Point2 b = t.vertices()[t.edges()[e][1]];
        const auto range = clip_segment_param(a, b, w.polygon.vertices());
        if (range) {
            out[1][0] += 1.0;
            out[1][1] += ((*range)[1] - (*range)[0]) * distance(a, b);
        }
    }
    for (std::size_t k = 0; k < t.count(2); ++k) {
        const FaceRef f{2, static_cast<int>(k)};
        if (!box_meets(t.box(f), wb)) {
            continue;
        }
        const auto piece = clip_polygon(t.geometry(f), w);
        if (piece) {
            const auto vol = intrinsic_volumes(*piece);
            out[2][0] += 1.0;
            out[2][1] += vol.v1;
            out[2][2] += vol.v2;
        }
    }
    return out;
}

long euler_oracle_combinatorial(const PlanarTessellation& t, const Coloring& c, const Window& w0) {
    require_in_core(t, w0);
    const Window w = generic_window(t, w0);
    const auto& wp = w.polygon.vertices();
    long chi = 0;
    for (std::size_t v = 0; v < t.count(0); ++v) {
        chi += c.black[0][v] && point_in_convex(t.vertices()[v], wp);
    }
    for (std::size_t e = 0; e < t.count(1); ++e) {
        if (c.black[1][e]) {
            const auto& ev = t.edges()[e];
            chi -= segment_intersects_convex(t.vertices()[ev[0]], t.vertices()[ev[1]], wp);
        }
    }
    for (std::size_t k = 0; k < t.count(2); ++k) {
        if (c.black[2][k]) {
            chi += convex_intersects(cell_polygon(t, static_cast<int>(k)), wp);
        }
    }
    return chi;
}

namespace {

bool on_window_boundary(Point2 p, const Window& w) {
    const auto& wp = w.polygon.vertices();
    for (std::size_t a = 0; a < wp.size(); ++a) {
        if (distance_point_segment(p, wp[a], wp[(a + 1) % wp.size()]) <= kGeomEps) {
            return true;
        }
    }
    return false;
}

double convex_gap(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            best = std::min(best, distance_point_segment(a[i], b[j], b[(j + 1) % b.size()]));
            best = std::min(best, distance_point_segment(b[j], a[i], a[(i + 1) % a.size()]));
        }
    }
    return best;
}

// x-extent of a convex polygon intersected with the closed slab ya <= y <= yb.
bool slab_extent(const std::vector<Point2>& poly, double ya, double yb, double& xmin, double& xmax) {
    xmin = std::numeric_limits<double>::infinity();
    xmax = -xmin;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = poly[i];
        const Point2 q = poly[(i + 1) % n];
        if (p.y >= ya && p.y <= yb) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
        }
        if (p.y == q.y) {
            continue;
        }
        for (double yl : {ya, yb}) {
            if ((p.y - yl) * (q.y - yl) < 0.0) {
                const double x = p.x + (yl - p.y) / (q.y - p.y) * (q.x - p.x);
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
            }
        }
    }
    return xmin <= xmax;
}

// Euler characteristic of the union of closed pixels meeting the polygons.
// Rows are kept as merged runs and glued with Mayer-Vietoris, so the cost
// grows with the row count rather than the pixel count.
long raster_euler(const std::vector<std::vector<Point2>>& polys, const std::array<double, 4>& wb, double res) {
    using Run = std::array<long, 2>;
    const double h = 1.0 / res;
    const long nx = static_cast<long>(std::ceil((wb[2] - wb[0]) * res));
    const long ny = static_cast<long>(std::ceil((wb[3] - wb[1]) * res));
    std::vector<std::array<double, 2>> yr;
    std::vector<std::size_t> order(polys.size());
    for (std::size_t k = 0; k < polys.size(); ++k) {
        double lo = 1e300, hi = -1e300;
        for (const auto& p : polys[k]) {
            lo = std::min(lo, p.y);
            hi = std::max(hi, p.y);
        }
        yr.push_back({lo, hi});
        order[k] = k;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return yr[a][0] < yr[b][0]; });
    std::vector<std::size_t> active;
    std::size_t next = 0;
    std::vector<Run> prev, cur, cuts;
    long chi = 0;
    for (long j = 0; j < ny; ++j) {
        const double ya = wb[1] + j * h;
        const double yb = ya + h;
        while (next < order.size() && yr[order[next]][0] <= yb) {
            active.push_back(order[next++]);
        }
        std::erase_if(active, [&](std::size_t k) { return yr[k][1] < ya; });
        cur.clear();
        for (std::size_t k : active) {
            double xmin, xmax;
            if (!slab_extent(polys[k], ya, yb, xmin, xmax)) {
                continue;
            }
            const long i0 = std::max(0L, static_cast<long>(std::ceil((xmin - wb[0]) / h)) - 1);
            const long i1 = std::min(nx - 1, static_cast<long>(std::floor((xmax - wb[0]) / h)));
            if (i0 <= i1) {
                cur.push_back({i0, i1});
            }
        }
        std::sort(cur.begin(), cur.end());
        std::size_t m = 0;
        for (const auto& r : cur) {
            if (m > 0 && r[0] <= cur[m - 1][1] + 1) {
                cur[m - 1][1] = std::max(cur[m - 1][1], r[1]);
            } else {
                cur[m++] = r;
            }
        }
        cur.resize(m);
        chi += static_cast<long>(m);
        // Components of the shared line: run [a, b] covers [a, b + 1].
        cuts.clear();
        for (std::size_t u = 0, v = 0; u < prev.size() && v < cur.size();) {
            const long lo = std::max(prev[u][0], cur[v][0]);
            const long hi = std::min(prev[u][1], cur[v][1]) + 1;
            if (lo <= hi) {
                if (!cuts.empty() && lo <= cuts.back()[1]) {
                    cuts.back()[1] = std::max(cuts.back()[1], hi);
                } else {
                    cuts.push_back({lo, hi});
                }
            }
            if (prev[u][1] < cur[v][1]) {
                ++u;
            } else {
                ++v;
            }
        }
        chi -= static_cast<long>(cuts.size());
        std::swap(prev, cur);
    }
    return chi;
}

}  // namespace

RasterResult euler_oracle_raster(const PlanarTessellation& t, const Coloring& c, const Window& w0, double resolution,
                                 double max_pixels) {
    if (c.mode_n != 2) {
        throw MeasureError("raster oracle requires cell mode");
    }
    require_in_core(t, w0);
    const Window w = generic_window(t, w0);
    const auto wb = w.bounds();

    std::vector<std::vector<Point2>> black;
    double feature = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < t.count(2); ++k) {
        const FaceRef f{2, static_cast<int>(k)};
        if (!box_meets(t.box(f), wb)) {
            continue;
        }
        const auto piece = clip_polygon(t.geometry(f), w);
        if (!piece) {
            continue;
        }
        const auto vol = intrinsic_volumes(*piece);
        feature = std::min(feature, vol.v2 / (2.0 * vol.v1));
        if (c.black[2][k]) {
            black.push_back(piece->vertices());
            continue;
        }
        // White openings along the window boundary.
        const auto& pv = piece->vertices();
        for (std::size_t a = 0; a < pv.size(); ++a) {
            const Point2 p = pv[a];
            const Point2 q = pv[(a + 1) % pv.size()];
            if (on_window_boundary(p, w) && on_window_boundary(q, w) && on_window_boundary(0.5 * (p + q), w)) {
                feature = std::min(feature, distance(p, q));
            }
        }
    }
    // Narrow white passages between two white cells.
    for (std::size_t e = 0; e < t.count(1); ++e) {
        if (c.black[1][e]) {
            continue;
        }
        const auto clipped = clip_segment(t.geometry({1, static_cast<int>(e)}), w);
        if (clipped.piece) {
            feature = std::min(feature, intrinsic_volumes(*clipped.piece).v1);
        }
    }
    for (std::size_t a = 0; a < black.size(); ++a) {
        for (std::size_t b = a + 1; b < black.size(); ++b) {
            if (!convex_intersects(black[a], black[b])) {
                feature = std::min(feature, convex_gap(black[a], black[b]));
            }
        }
    }
    double res = resolution;
    if (std::isfinite(feature)) {
        res = std::max(res, 3.0 / feature);
    }
    const double area_box = (wb[2] - wb[0]) * (wb[3] - wb[1]);
    std::vector<long> seen;
    while (area_box * res * res <= max_pixels) {
        seen.push_back(raster_euler(black, wb, res));
        const std::size_t n = seen.size();
        if (n >= 3 && seen[n - 1] == seen[n - 2] && seen[n - 2] == seen[n - 3]) {
            return {seen.back(), res / 4.0};
        }
        res *= 2.0;
    }
    throw MeasureError("resolution insufficient");
}

}  // namespace faceperc
