#pragma once

#include <span>
#include <vector>

namespace prefeval {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Simple polygon with counter-clockwise vertex order; the ring is implicitly
/// closed (the first vertex is not repeated).
class Polygon {
public:
    Polygon() = default;

    /// Validates the ring (>= 3 vertices, simple, non-zero area) and reorders
    /// it counter-clockwise.
    explicit Polygon(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }

    friend bool operator==(const Polygon&, const Polygon&) = default;

private:
    std::vector<Point> vertices_;
};

/// Signed shoelace area; positive for counter-clockwise rings.
double signed_area(std::span<const Point> ring);
double area(const Polygon& poly);
Point centroid(const Polygon& poly);
double shortest_edge(const Polygon& poly);

/// True when no two non-adjacent edges touch and no edge is degenerate.
bool is_simple(std::span<const Point> ring);

/// Convex hull (Andrew's monotone chain), counter-clockwise, no collinear points.
std::vector<Point> convex_hull(std::span<const Point> points);

/// Angle between the two edges meeting at vertex i, in degrees within [0,180].
double vertex_angle_deg(const Polygon& poly, std::size_t i);

struct OrientedRect {
    double angle_deg = 0.0;   ///< direction of the long side, in [0,180)
    double length = 0.0;      ///< long side
    double width = 0.0;       ///< short side
    double area() const { return length * width; }
};

/// Minimum-area enclosing rectangle by rotating calipers over hull edges.
OrientedRect min_area_rect(const Polygon& poly);

/// Orientation of the minimum-area rectangle's long side, in [0,180).
double principal_orientation_deg(const Polygon& poly);

/// Absolute difference between two directions, folded modulo 90 degrees into [0,45].
double orientation_gap_deg(double a_deg, double b_deg);

Polygon translated(const Polygon& poly, double dx, double dy);
Polygon rotated(const Polygon& poly, double angle_deg, Point pivot);
Polygon scaled(const Polygon& poly, double factor, Point pivot);

}  // namespace prefeval
