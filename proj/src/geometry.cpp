#include "prefeval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "prefeval/error.hpp"

namespace prefeval {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point p, Point q, Point r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
           std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    const int d1 = sign(cross(q1, q2, p1));
    const int d2 = sign(cross(q1, q2, p2));
    const int d3 = sign(cross(p1, p2, q1));
    const int d4 = sign(cross(p1, p2, q2));
    if (d1 != d2 && d3 != d4 && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) {
        return true;
    }
    if (d1 == 0 && on_segment(q1, p1, q2)) return true;
    if (d2 == 0 && on_segment(q1, p2, q2)) return true;
    if (d3 == 0 && on_segment(p1, q1, p2)) return true;
    if (d4 == 0 && on_segment(p1, q2, p2)) return true;
    return false;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
        throw invalid_argument("polygon needs at least 3 vertices");
    }
    for (const auto& v : vertices_) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw invalid_argument("polygon vertex is not finite");
        }
    }
    const double a = signed_area(vertices_);
    if (std::abs(a) <= 1e-9) {
        throw invalid_argument("polygon has zero area");
    }
    if (!is_simple(vertices_)) {
        throw invalid_argument("polygon is self-intersecting");
    }
    if (a < 0.0) {
        std::reverse(vertices_.begin(), vertices_.end());
    }
}

double signed_area(std::span<const Point> ring) {
    double s = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

double area(const Polygon& poly) { return std::abs(signed_area(poly.vertices())); }

Point centroid(const Polygon& poly) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    // Shift to the first vertex to keep the cross products well conditioned.
    const Point o = v[0];
    double a2 = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x0 = v[i].x - o.x;
        const double y0 = v[i].y - o.y;
        const double x1 = v[(i + 1) % n].x - o.x;
        const double y1 = v[(i + 1) % n].y - o.y;
        const double c = x0 * y1 - x1 * y0;
        a2 += c;
        cx += (x0 + x1) * c;
        cy += (y0 + y1) * c;
    }
    return {o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2)};
}

double shortest_edge(const Polygon& poly) {
    const auto& v = poly.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        best = std::min(best, std::hypot(b.x - a.x, b.y - a.y));
    }
    return best;
}

bool is_simple(std::span<const Point> ring) {
    const std::size_t n = ring.size();
    if (n < 3) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (ring[i] == ring[(i + 1) % n]) {
            return false;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point a1 = ring[i];
        const Point a2 = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            const Point b1 = ring[j];
            const Point b2 = ring[(j + 1) % n];
            if (adjacent) {
                // Adjacent edges may only share their common vertex; a fold-back
                // (collinear overlap) counts as an intersection.
                const Point shared = j == i + 1 ? a2 : a1;
                const Point other_a = j == i + 1 ? a1 : a2;
                const Point other_b = j == i + 1 ? b2 : b1;
                if (cross(shared, other_a, other_b) == 0.0) {
                    const double dot = (other_a.x - shared.x) * (other_b.x - shared.x) +
                                       (other_a.y - shared.y) * (other_b.y - shared.y);
                    if (dot > 0.0) {
                        return false;
                    }
                }
                continue;
            }
            if (segments_intersect(a1, a2, b1, b2)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        const Point& p = pts[i - 1];
        while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

double vertex_angle_deg(const Polygon& poly, std::size_t i) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    const Point& prev = v[(i + n - 1) % n];
    const Point& cur = v[i];
    const Point& next = v[(i + 1) % n];
    const double ux = prev.x - cur.x, uy = prev.y - cur.y;
    const double wx = next.x - cur.x, wy = next.y - cur.y;
    return std::atan2(std::abs(ux * wy - uy * wx), ux * wx + uy * wy) / kDeg;
}

OrientedRect min_area_rect(const Polygon& poly) {
    const auto hull = convex_hull(poly.vertices());
    OrientedRect best;
    double best_area = std::numeric_limits<double>::infinity();
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = hull[i];
        const Point& b = hull[(i + 1) % n];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        const double ux = (b.x - a.x) / len;
        const double uy = (b.y - a.y) / len;
        double min_u = std::numeric_limits<double>::infinity(), max_u = -min_u;
        double min_v = min_u, max_v = -min_u;
        for (const Point& p : hull) {
            const double du = (p.x - a.x) * ux + (p.y - a.y) * uy;
            const double dv = -(p.x - a.x) * uy + (p.y - a.y) * ux;
            min_u = std::min(min_u, du);
            max_u = std::max(max_u, du);
            min_v = std::min(min_v, dv);
            max_v = std::max(max_v, dv);
        }
        const double extent_u = max_u - min_u;
        const double extent_v = max_v - min_v;
        const double rect_area = extent_u * extent_v;
        // Near-ties keep the earlier hull edge so the choice does not hinge on
        // rounding (e.g. after translating the polygon).
        if (rect_area < best_area * (1.0 - 1e-9)) {
            best_area = rect_area;
            double angle = std::atan2(uy, ux) / kDeg;
            if (extent_v > extent_u) {
                angle += 90.0;
            }
            angle = std::fmod(angle, 180.0);
            if (angle < 0.0) angle += 180.0;
            best.angle_deg = angle;
            best.length = std::max(extent_u, extent_v);
            best.width = std::min(extent_u, extent_v);
        }
    }
    return best;
}

double principal_orientation_deg(const Polygon& poly) { return min_area_rect(poly).angle_deg; }

double orientation_gap_deg(double a_deg, double b_deg) {
    double d = std::fmod(std::abs(a_deg - b_deg), 90.0);
    return std::min(d, 90.0 - d);
}

Polygon translated(const Polygon& poly, double dx, double dy) {
    std::vector<Point> v = poly.vertices();
    for (auto& p : v) {
        p.x += dx;
        p.y += dy;
    }
    return Polygon(std::move(v));
}

Polygon rotated(const Polygon& poly, double angle_deg, Point pivot) {
    const double c = std::cos(angle_deg * kDeg);
    const double s = std::sin(angle_deg * kDeg);
    std::vector<Point> v = poly.vertices();
    for (auto& p : v) {
        const double x = p.x - pivot.x;
        const double y = p.y - pivot.y;
        p = {pivot.x + c * x - s * y, pivot.y + s * x + c * y};
    }
    return Polygon(std::move(v));
}

Polygon scaled(const Polygon& poly, double factor, Point pivot) {
    if (!(factor > 0.0)) {
        throw invalid_argument("scale factor must be positive");
    }
    std::vector<Point> v = poly.vertices();
    for (auto& p : v) {
        p = {pivot.x + factor * (p.x - pivot.x), pivot.y + factor * (p.y - pivot.y)};
    }
    return Polygon(std::move(v));
}

}  // namespace prefeval
