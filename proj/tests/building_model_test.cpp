#include "doctest.h"

#include <cmath>

#include "prefeval/building_model.hpp"
#include "prefeval/error.hpp"

using namespace prefeval;

namespace {

Polygon rect(double x0, double y0, double w, double h) {
    return Polygon({{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}});
}

double sat(const SatisfactionVector& v, const ScenarioConfig& cfg, const std::string& name) {
    return v[*cfg.constraint_set.index_of(name)];
}

}  // namespace

TEST_CASE("generate_building is deterministic and valid") {
    const auto a = generate_building(1);
    const auto b = generate_building(1);
    CHECK(a.initial == b.initial);
    CHECK(a.object_id == b.object_id);
    CHECK_FALSE(generate_building(2).initial == a.initial);
}

TEST_CASE("generated footprints stay within the documented size range") {
    // Sweep over 1000 seeds: sides 4-38 m, notches cut at most 40% per side,
    // so every area lies in [4, 1600] m^2.
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto b = generate_building(seed);
        const double a = area(b.initial);
        CHECK(a >= 4.0);
        CHECK(a <= 1600.0);
        CHECK(b.initial.size() >= 4);
        CHECK(b.initial.size() <= 10);
        CHECK(is_simple(b.initial.vertices()));
        for (std::size_t i = 0; i < b.initial.size(); ++i) {
            CHECK(std::abs(vertex_angle_deg(b.initial, i) - 90.0) < 6.0);
        }
    }
}

TEST_CASE("evaluate_constraints examples") {
    const ScenarioConfig cfg;
    const Polygon sq = rect(0, 0, 10, 10);
    const auto same = evaluate_constraints(sq, sq, cfg);
    CHECK(sat(same, cfg, "position") == 1.0);
    CHECK(sat(same, cfg, "orientation") == 1.0);
    CHECK(sat(same, cfg, "size") == 1.0);          // 100 m^2 at a 100 m^2 threshold
    CHECK(sat(same, cfg, "squareness") == 1.0);
    CHECK(sat(same, cfg, "convexity") == 1.0);
    CHECK(sat(same, cfg, "granularity") == 1.0);

    const auto shifted = evaluate_constraints(sq, translated(sq, 3.0, 4.0), cfg);
    CHECK(sat(shifted, cfg, "position") == doctest::Approx(0.5).epsilon(1e-12));

    const Polygon small = rect(0, 0, 5, 4);
    const auto s = evaluate_constraints(small, small, cfg);
    CHECK(sat(s, cfg, "size") == doctest::Approx(0.2));
    CHECK(sat(s, cfg, "granularity") == 1.0);

    const Polygon thin = rect(0, 0, 40, 1.25);
    CHECK(sat(evaluate_constraints(thin, thin, cfg), cfg, "granularity") == doctest::Approx(0.5));

    const Polygon l({{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}});
    CHECK(sat(evaluate_constraints(l, l, cfg), cfg, "convexity") == doctest::Approx(12.0 / 14.0));

    // A 10-degree skew at two corners: angles 80 and 100, deviation 10/25 each.
    const Polygon par({{0, 0}, {10, 0}, {10 + 10 * std::tan(10 * M_PI / 180), 10},
                       {10 * std::tan(10 * M_PI / 180), 10}});
    CHECK(sat(evaluate_constraints(par, par, cfg), cfg, "squareness") == doctest::Approx(0.6));

    const Polygon turned = rotated(rect(0, 0, 12, 6), 10.0, {6, 3});
    CHECK(sat(evaluate_constraints(rect(0, 0, 12, 6), turned, cfg), cfg, "orientation") ==
          doctest::Approx(1.0 - 10.0 / 15.0));
}

TEST_CASE("rotating 25 degrees zeroes orientation at a 15 degree tolerance") {
    const ScenarioConfig cfg;
    const auto b = generate_building(5);
    const auto c = make_candidate(b, "x", {{"rotate", {25.0}}}, cfg);
    CHECK(sat(c.satisfactions, cfg, "orientation") == 0.0);
    CHECK(sat(c.satisfactions, cfg, "position") == doctest::Approx(1.0).epsilon(1e-9));
    const auto id = make_candidate(b, "y", {{"identity", {}}}, cfg);
    CHECK(sat(id.satisfactions, cfg, "orientation") == 1.0);
    CHECK(sat(id.satisfactions, cfg, "position") == 1.0);
}

TEST_CASE("constraint set selects and orders the measures") {
    ScenarioConfig cfg;
    cfg.constraint_set = ConstraintSet({"position", "size"});
    const Polygon sq = rect(0, 0, 5, 5);
    const auto v = evaluate_constraints(sq, translated(sq, 2.0, 0.0), cfg);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == doctest::Approx(0.8));
    CHECK(v[1] == doctest::Approx(0.25));

    cfg.constraint_set = ConstraintSet({"size", "colour"});
    CHECK_THROWS_AS(cfg.validate(), Error);
    ScenarioConfig bad;
    bad.min_edge_m = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("generate_candidates") {
    const ScenarioConfig cfg;
    const auto b = generate_building(42);
    CHECK_THROWS_AS(generate_candidates(b, cfg, 1, 0), Error);

    const auto first = generate_candidates(b, cfg, 6, 9);
    const auto again = generate_candidates(b, cfg, 6, 9);
    REQUIRE(first.size() == 6);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].geometry == again[i].geometry);
        CHECK(first[i].satisfactions == again[i].satisfactions);
        CHECK(first[i].object_id == b.object_id);
        for (std::size_t j = i + 1; j < first.size(); ++j) {
            CHECK_FALSE(first[i].geometry == first[j].geometry);
        }
        // Replaying the recorded recipe reproduces the stored candidate.
        const auto replay = make_candidate(b, "r", first[i].provenance, cfg);
        CHECK(replay.geometry == first[i].geometry);
        const auto recomputed = evaluate_constraints(b.initial, first[i].geometry, cfg);
        for (std::size_t k = 0; k < recomputed.size(); ++k) {
            CHECK(std::abs(recomputed[k] - first[i].satisfactions[k]) < 1e-9);
        }
    }
}

TEST_CASE("satisfactions stay in [0,1] over 10,000 random candidates") {
    const ScenarioConfig cfg;
    int checked = 0;
    for (std::uint64_t seed = 0; checked < 10000; ++seed) {
        const auto b = generate_building(seed);
        for (const auto& c : generate_candidates(b, cfg, 5, seed * 31 + 1)) {
            for (double v : c.satisfactions) {
                REQUIRE(v >= 0.0);
                REQUIRE(v <= 1.0);
            }
            ++checked;
        }
    }
}

TEST_CASE("evaluation of a polygon against itself is perfectly positioned and oriented") {
    const ScenarioConfig cfg;
    for (std::uint64_t seed = 100; seed < 300; ++seed) {
        const auto b = generate_building(seed);
        const auto v = evaluate_constraints(b.initial, b.initial, cfg);
        CHECK(sat(v, cfg, "position") == 1.0);
        CHECK(sat(v, cfg, "orientation") == 1.0);
    }
}

TEST_CASE("translating both polygons leaves satisfactions unchanged") {
    const ScenarioConfig cfg;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto b = generate_building(seed);
        for (const auto& c : generate_candidates(b, cfg, 3, seed)) {
            const auto before = evaluate_constraints(b.initial, c.geometry, cfg);
            const auto after = evaluate_constraints(translated(b.initial, 123.4, -56.7),
                                                    translated(c.geometry, 123.4, -56.7), cfg);
            for (std::size_t k = 0; k < before.size(); ++k) {
                INFO(cfg.constraint_set[k], " seed ", seed, " ", c.candidate_id);
                CHECK(std::abs(before[k] - after[k]) < 1e-9);
            }
        }
    }
}

TEST_CASE("transform operators") {
    const ScenarioConfig cfg;
    const Polygon small = rect(0, 0, 5, 5);
    CHECK(area(apply_transform(small, {"enlarge", {2.0}}, cfg)) == doctest::Approx(100.0));
    const Polygon tiny = rect(0, 0, 2, 2);
    CHECK(area(apply_transform(tiny, {"enlarge", {2.0}}, cfg)) == doctest::Approx(16.0));  // capped
    const Polygon big = rect(0, 0, 20, 20);
    CHECK(apply_transform(big, {"enlarge", {2.0}}, cfg) == big);

    const Polygon moved = apply_transform(big, {"translate", {5.0, 90.0}}, cfg);
    CHECK(centroid(moved).x == doctest::Approx(10.0));
    CHECK(centroid(moved).y == doctest::Approx(15.0));

    CHECK_THROWS_AS(apply_transform(big, {"explode", {}}, cfg), Error);
    CHECK_THROWS_AS(apply_transform(big, {"rotate", {}}, cfg), Error);

    // A 0.2 m bump on a long edge disappears at a 0.5 m tolerance.
    const std::vector<Point> bumpy{{0, 0}, {5, 0.2}, {10, 0}, {10, 10}, {0, 10}};
    CHECK(decimate(bumpy, 0.5).size() == 4);
    CHECK(decimate(bumpy, 0.1).size() == 5);

    const Polygon skewed({{0, 0}, {10, 0.5}, {10.3, 8}, {-0.2, 8.1}});
    const Polygon squared(square_corners(skewed, 15.0));
    for (std::size_t i = 0; i < squared.size(); ++i) {
        CHECK(vertex_angle_deg(squared, i) == doctest::Approx(90.0).epsilon(1e-9));
    }
}
