#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace faceperc {

/// Tolerance for collinearity and containment tests, in window length units.
inline constexpr double kGeomEps = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

class GeometryError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A convex face of dimension 0, 1 or 2.
///
/// Dimension 2 polygons are stored counter-clockwise. Construction validates
/// the invariants and throws GeometryError on degenerate input.
class FaceGeometry {
  public:
    static FaceGeometry point(Point2 p);
    static FaceGeometry segment(Point2 a, Point2 b);
    static FaceGeometry polygon(std::vector<Point2> vertices);

    int dim() const { return dim_; }
    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    FaceGeometry translated(Point2 offset) const;
    FaceGeometry scaled(double factor) const;

  private:
    FaceGeometry(int dim, std::vector<Point2> v) : dim_(dim), vertices_(std::move(v)) {}

    int dim_ = 0;
    std::vector<Point2> vertices_;
};

struct IntrinsicVolumes {
    double v0 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;

    double operator[](int i) const { return i == 0 ? v0 : (i == 1 ? v1 : v2); }
};

double polygon_signed_area(const std::vector<Point2>& poly);
double polygon_perimeter(const std::vector<Point2>& poly);

/// (Euler characteristic, half boundary length or length, area).
IntrinsicVolumes intrinsic_volumes(const FaceGeometry& g);

/// Exterior-angle weighted vertex average; midpoint for segments.
Point2 steiner_point(const FaceGeometry& g);

/// Observation window W_t = sqrt(t) * W for a convex base polygon W.
struct Window {
    FaceGeometry polygon;
    double scale_t = 1.0;

    /// Unit-area square centred at the origin, scaled to area t.
    static Window centered_square(double t);
    /// Axis-parallel rectangle; scale_t is set to its area.
    static Window rectangle(double xmin, double ymin, double xmax, double ymax);
    static Window scaled(const FaceGeometry& base, double t);

    double area() const;
    std::array<double, 4> bounds() const;  // xmin, ymin, xmax, ymax
    bool contains(Point2 p, double eps = 0.0) const;
    Window translated(Point2 offset) const;
};

std::optional<FaceGeometry> clip_polygon(const FaceGeometry& g, const Window& w);

struct SegmentClip {
    std::optional<FaceGeometry> piece;
    int boundary_hits = 0;  // points of the clipped piece on the window boundary
};

SegmentClip clip_segment(const FaceGeometry& g, const Window& w);

/// Parametric interval [t0, t1] of segment a->b inside a convex CCW polygon.
std::optional<std::array<double, 2>> clip_segment_param(Point2 a, Point2 b,
                                                        const std::vector<Point2>& convex);

/// Separating-axis tests between closed convex sets.
bool convex_intersects(const std::vector<Point2>& a, const std::vector<Point2>& b);
bool segment_intersects_convex(Point2 a, Point2 b, const std::vector<Point2>& convex);
bool point_in_convex(Point2 p, const std::vector<Point2>& convex, double eps = 0.0);

double distance_point_segment(Point2 p, Point2 a, Point2 b);

}  // namespace faceperc
