#include "doctest.h"

#include <cmath>

#include "prefeval/error.hpp"
#include "prefeval/geometry.hpp"

using namespace prefeval;

namespace {

Polygon rect(double x0, double y0, double w, double h) {
    return Polygon({{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}});
}

}  // namespace

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), Error);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), Error);                  // zero area
    CHECK_THROWS_AS(Polygon({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), Error);          // bow tie
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), Error);          // repeated vertex
    CHECK_THROWS_AS(Polygon({{0, 0}, {4, 0}, {2, 0}, {2, 3}}), Error);          // fold-back

    // Clockwise input is reordered counter-clockwise.
    const Polygon cw({{0, 0}, {0, 3}, {4, 3}, {4, 0}});
    CHECK(signed_area(cw.vertices()) == doctest::Approx(12.0));
}

TEST_CASE("area, centroid, edges") {
    const Polygon r = rect(10, 20, 4, 2);
    CHECK(area(r) == doctest::Approx(8.0));
    const Point c = centroid(r);
    CHECK(c.x == doctest::Approx(12.0));
    CHECK(c.y == doctest::Approx(21.0));
    CHECK(shortest_edge(r) == doctest::Approx(2.0));

    // L-shape: 4x4 square minus the 2x2 top-right quadrant.
    const Polygon l({{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}});
    CHECK(area(l) == doctest::Approx(12.0));
    const Point lc = centroid(l);
    // (2*2*... ) composed of a 4x2 bar (centroid 2,1) and a 2x2 block (1,3)
    CHECK(lc.x == doctest::Approx((8.0 * 2 + 4.0 * 1) / 12.0));
    CHECK(lc.y == doctest::Approx((8.0 * 1 + 4.0 * 3) / 12.0));
    CHECK(std::abs(signed_area(convex_hull(l.vertices()))) == doctest::Approx(14.0));
    CHECK(vertex_angle_deg(l, 3) == doctest::Approx(90.0));  // reflex corner
}

TEST_CASE("convex hull drops interior and collinear points") {
    const std::vector<Point> pts{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {1, 1}, {0, 2}};
    const auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    CHECK(signed_area(hull) == doctest::Approx(4.0));
}

TEST_CASE("minimum-area rectangle orientation") {
    const Polygon r = rect(0, 0, 10, 4);
    const auto mar = min_area_rect(r);
    CHECK(mar.length == doctest::Approx(10.0));
    CHECK(mar.width == doctest::Approx(4.0));
    CHECK(orientation_gap_deg(mar.angle_deg, 0.0) == doctest::Approx(0.0).epsilon(1e-9));

    for (double angle : {5.0, 17.0, 33.0, 60.0, 95.0, 170.0}) {
        const Polygon rr = rotated(r, angle, {5, 2});
        CHECK(area(rr) == doctest::Approx(40.0));
        CHECK(orientation_gap_deg(principal_orientation_deg(rr), principal_orientation_deg(r)) ==
              doctest::Approx(orientation_gap_deg(angle, 0.0)).epsilon(1e-9));
    }
}

TEST_CASE("orientation gap folds modulo 90 degrees") {
    CHECK(orientation_gap_deg(0.0, 90.0) == doctest::Approx(0.0));
    CHECK(orientation_gap_deg(10.0, 100.0) == doctest::Approx(0.0));
    CHECK(orientation_gap_deg(0.0, 25.0) == doctest::Approx(25.0));
    CHECK(orientation_gap_deg(170.0, 5.0) == doctest::Approx(15.0));
    CHECK(orientation_gap_deg(0.0, 45.0) == doctest::Approx(45.0));
    CHECK(orientation_gap_deg(0.0, 60.0) == doctest::Approx(30.0));
}

TEST_CASE("transforms") {
    const Polygon r = rect(0, 0, 2, 2);
    const Polygon t = translated(r, 3, -1);
    CHECK(centroid(t).x == doctest::Approx(4.0));
    CHECK(centroid(t).y == doctest::Approx(0.0));
    const Polygon s = scaled(r, 2.0, {1, 1});
    CHECK(area(s) == doctest::Approx(16.0));
    CHECK(centroid(s).x == doctest::Approx(1.0));
    CHECK_THROWS_AS(scaled(r, 0.0, {0, 0}), Error);
}
