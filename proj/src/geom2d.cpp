#include "faceperc/geom2d.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace faceperc {

namespace {

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Drops consecutive duplicates and vertices lying on the segment joining
// their neighbours.
std::vector<Point2> tidy_convex(std::vector<Point2> v) {
    std::vector<Point2> out;
    out.reserve(v.size());
    for (const auto& p : v) {
        if (out.empty() || distance(out.back(), p) > 1e-12) {
            out.push_back(p);
        }
    }
    while (out.size() > 1 && distance(out.front(), out.back()) <= 1e-12) {
        out.pop_back();
    }
    bool changed = true;
    while (changed && out.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const Point2 prev = out[(i + out.size() - 1) % out.size()];
            const Point2 next = out[(i + 1) % out.size()];
            const double base = distance(prev, next);
            if (base > 0.0 && std::abs(orient(prev, out[i], next)) <= 1e-12 * base) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace

FaceGeometry FaceGeometry::point(Point2 p) {
    if (!finite(p)) {
        throw GeometryError("point has non-finite coordinates");
    }
    return FaceGeometry(0, {p});
}

FaceGeometry FaceGeometry::segment(Point2 a, Point2 b) {
    if (!finite(a) || !finite(b)) {
        throw GeometryError("segment has non-finite coordinates");
    }
    if (a == b) {
        throw GeometryError("segment endpoints coincide");
    }
    return FaceGeometry(1, {a, b});
}

FaceGeometry FaceGeometry::polygon(std::vector<Point2> v) {
    if (v.size() < 3) {
        throw GeometryError("polygon needs at least three vertices");
    }
    for (const auto& p : v) {
        if (!finite(p)) {
            throw GeometryError("polygon has non-finite coordinates");
        }
    }
    double area = polygon_signed_area(v);
    if (area < 0.0) {
        std::reverse(v.begin(), v.end());
        area = -area;
    }
    if (!(area > kGeomEps * kGeomEps)) {
        throw GeometryError("degenerate polygon (zero area)");
    }
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = v[(i + n - 1) % n];
        const Point2 b = v[i];
        const Point2 c = v[(i + 1) % n];
        if (orient(a, b, c) < -kGeomEps * (distance(a, b) + distance(b, c))) {
            throw GeometryError("polygon is not convex");
        }
    }
    return FaceGeometry(2, std::move(v));
}

FaceGeometry FaceGeometry::translated(Point2 offset) const {
    auto v = vertices_;
    for (auto& p : v) {
        p = p + offset;
    }
    return FaceGeometry(dim_, std::move(v));
}

FaceGeometry FaceGeometry::scaled(double factor) const {
    if (!(factor > 0.0)) {
        throw GeometryError("scale factor must be positive");
    }
    auto v = vertices_;
    for (auto& p : v) {
        p = factor * p;
    }
    return FaceGeometry(dim_, std::move(v));
}

double polygon_signed_area(const std::vector<Point2>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        s += cross(poly[i], poly[(i + 1) % n]);
    }
    return 0.5 * s;
}

double polygon_perimeter(const std::vector<Point2>& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        s += distance(poly[i], poly[(i + 1) % n]);
    }
    return s;
}

IntrinsicVolumes intrinsic_volumes(const FaceGeometry& g) {
    switch (g.dim()) {
    case 0:
        return {1.0, 0.0, 0.0};
    case 1:
        return {1.0, distance(g.vertices()[0], g.vertices()[1]), 0.0};
    default:
        return {1.0, 0.5 * polygon_perimeter(g.vertices()), polygon_signed_area(g.vertices())};
    }
}

Point2 steiner_point(const FaceGeometry& g) {
    const auto& v = g.vertices();
    if (g.dim() == 0) {
        return v[0];
    }
    if (g.dim() == 1) {
        return 0.5 * (v[0] + v[1]);
    }
    const std::size_t n = v.size();
    Point2 acc{0.0, 0.0};
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 din = v[i] - v[(i + n - 1) % n];
        const Point2 dout = v[(i + 1) % n] - v[i];
        const double beta = std::atan2(cross(din, dout), dot(din, dout));
        acc = acc + beta * v[i];
        total += beta;
    }
    // total equals 2*pi for a closed convex CCW polygon
    return (1.0 / total) * acc;
}

Window Window::centered_square(double t) {
    if (!(t > 0.0)) {
        throw GeometryError("window scale t must be positive");
    }
    const double h = 0.5 * std::sqrt(t);
    return Window{FaceGeometry::polygon({{-h, -h}, {h, -h}, {h, h}, {-h, h}}), t};
}

Window Window::rectangle(double xmin, double ymin, double xmax, double ymax) {
    auto poly = FaceGeometry::polygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}});
    return Window{poly, (xmax - xmin) * (ymax - ymin)};
}

Window Window::scaled(const FaceGeometry& base, double t) {
    if (base.dim() != 2) {
        throw GeometryError("window base must be a polygon");
    }
    return Window{base.scaled(std::sqrt(t)), t};
}

double Window::area() const { return polygon_signed_area(polygon.vertices()); }

std::array<double, 4> Window::bounds() const {
    std::array<double, 4> b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : polygon.vertices()) {
        b[0] = std::min(b[0], p.x);
        b[1] = std::min(b[1], p.y);
        b[2] = std::max(b[2], p.x);
        b[3] = std::max(b[3], p.y);
    }
    return b;
}

bool Window::contains(Point2 p, double eps) const { return point_in_convex(p, polygon.vertices(), eps); }

Window Window::translated(Point2 offset) const { return Window{polygon.translated(offset), scale_t}; }

std::optional<FaceGeometry> clip_polygon(const FaceGeometry& g, const Window& w) {
    if (g.dim() != 2) {
        throw GeometryError("clip_polygon expects a polygon");
    }
    std::vector<Point2> poly = g.vertices();
    const auto& clip = w.polygon.vertices();
    const std::size_t m = clip.size();
    std::vector<Point2> next;
    for (std::size_t e = 0; e < m && !poly.empty(); ++e) {
        const Point2 a = clip[e];
        const Point2 b = clip[(e + 1) % m];
        next.clear();
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 p = poly[i];
            const Point2 q = poly[(i + 1) % n];
            const double fp = orient(a, b, p);
            const double fq = orient(a, b, q);
            if (fp >= 0.0) {
                next.push_back(p);
            }
            if ((fp >= 0.0) != (fq >= 0.0)) {
                const double s = fp / (fp - fq);
                next.push_back(p + s * (q - p));
            }
        }
        poly.swap(next);
    }
    poly = tidy_convex(std::move(poly));
    if (poly.size() < 3) {
        return std::nullopt;
    }
    const double area = polygon_signed_area(poly);
    if (!(area > kGeomEps * kGeomEps)) {
        return std::nullopt;
    }
    return FaceGeometry::polygon(std::move(poly));
}

std::optional<std::array<double, 2>> clip_segment_param(Point2 a, Point2 b, const std::vector<Point2>& convex) {
    double t0 = 0.0;
    double t1 = 1.0;
    const std::size_t m = convex.size();
    for (std::size_t e = 0; e < m; ++e) {
        const Point2 p = convex[e];
        const Point2 q = convex[(e + 1) % m];
        const double fa = orient(p, q, a);
        const double fb = orient(p, q, b);
        if (fa < 0.0 && fb < 0.0) {
            return std::nullopt;
        }
        if (fa < 0.0) {
            t0 = std::max(t0, fa / (fa - fb));
        } else if (fb < 0.0) {
            t1 = std::min(t1, fa / (fa - fb));
        }
        if (t1 - t0 <= 1e-12) {
            return std::nullopt;
        }
    }
    return std::array<double, 2>{t0, t1};
}

SegmentClip clip_segment(const FaceGeometry& g, const Window& w) {
    if (g.dim() != 1) {
        throw GeometryError("clip_segment expects a segment");
    }
    const Point2 a = g.vertices()[0];
    const Point2 b = g.vertices()[1];
    auto range = clip_segment_param(a, b, w.polygon.vertices());
    SegmentClip out;
    if (!range) {
        return out;
    }
    const auto [t0, t1] = *range;
    out.boundary_hits = (t0 > 0.0 ? 1 : 0) + (t1 < 1.0 ? 1 : 0);
    const Point2 pa = t0 > 0.0 ? a + t0 * (b - a) : a;
    const Point2 pb = t1 < 1.0 ? a + t1 * (b - a) : b;
    out.piece = FaceGeometry::segment(pa, pb);
    return out;
}

namespace {

void project(const std::vector<Point2>& pts, Point2 axis, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& p : pts) {
        const double d = dot(p, axis);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
}

bool separated_on_edges_of(const std::vector<Point2>& owner, const std::vector<Point2>& a,
                           const std::vector<Point2>& b) {
    const std::size_t n = owner.size();
    const std::size_t edges = n == 2 ? 1 : n;
    for (std::size_t i = 0; i < edges; ++i) {
        const Point2 d = owner[(i + 1) % n] - owner[i];
        const Point2 axis{-d.y, d.x};
        double alo, ahi, blo, bhi;
        project(a, axis, alo, ahi);
        project(b, axis, blo, bhi);
        if (ahi < blo || bhi < alo) {
            return true;
        }
    }
    return false;
}

}  // namespace

bool convex_intersects(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    return !separated_on_edges_of(a, a, b) && !separated_on_edges_of(b, a, b);
}

bool segment_intersects_convex(Point2 a, Point2 b, const std::vector<Point2>& convex) {
    const std::vector<Point2> seg{a, b};
    return convex_intersects(seg, convex);
}

bool point_in_convex(Point2 p, const std::vector<Point2>& convex, double eps) {
    const std::size_t n = convex.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = convex[i];
        const Point2 b = convex[(i + 1) % n];
        if (orient(a, b, p) < -eps * distance(a, b)) {
            return false;
        }
    }
    return true;
}

double distance_point_segment(Point2 p, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) {
        return distance(p, a);
    }
    const double s = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return distance(p, a + s * d);
}

}  // namespace faceperc
