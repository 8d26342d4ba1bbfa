#include "doctest.h"

#include "fixtures.hpp"
#include "prefeval/compatibility.hpp"
#include "prefeval/error.hpp"

using namespace prefeval;
using namespace prefeval::testing;
using L = PreferenceLabel;

namespace {

const ConstraintSet kOne({"size"});
const EvaluationFunction kIdentity(kOne, {1.0}, 1);

}  // namespace

TEST_CASE("comp examples") {
    const CompatibilityThresholds t;
    CHECK(comp(synthetic_comparison("e", {0.6}, {0.6}), kIdentity, L::Equivalent, t, kOne) == 0);
    CompatibilityThresholds zero_eq;
    zero_eq.eq_max = 0.0;
    CHECK(comp(synthetic_comparison("e", {0.6}, {0.6}), kIdentity, L::Equivalent, zero_eq, kOne) == 0);

    CompatibilityThresholds fb;
    fb.fb_min = 0.25;
    CHECK(is_compatible(0.30, L::FarBetterA, fb));
    CHECK(comp(synthetic_comparison("f", {0.8}, {0.5}), kIdentity, L::FarBetterA, fb, kOne) == 0);

    CompatibilityThresholds sb;
    sb.sb_max = 0.15;
    CHECK_FALSE(is_compatible(0.50, L::SlightlyBetterA, sb));
    CHECK(comp(synthetic_comparison("s", {0.9}, {0.4}), kIdentity, L::SlightlyBetterA, sb, kOne) == 1);

    CompatibilityThresholds b;
    b.b_min = 0.10;
    b.b_max = 0.30;
    CHECK(is_compatible(-0.20, L::BetterB, b));
    CHECK(comp(synthetic_comparison("b", {0.3}, {0.5}), kIdentity, L::BetterB, b, kOne) == 0);
}

TEST_CASE("comp projects scenario vectors onto the function's constraints") {
    const ConstraintSet scenario({"size", "position"});
    const EvaluationFunction on_position(ConstraintSet({"position"}), {1.0}, 1);
    const auto c = synthetic_comparison("p", {0.0, 0.9}, {1.0, 0.5});
    CHECK(comp(c, on_position, L::FarBetterA, CompatibilityThresholds{}, scenario) == 0);
    const EvaluationFunction on_orientation(ConstraintSet({"orientation"}), {1.0}, 1);
    CHECK_THROWS_AS(comp(c, on_orientation, L::FarBetterA, CompatibilityThresholds{}, scenario), Error);
}

TEST_CASE("thresholds validation") {
    CompatibilityThresholds t;
    CHECK_NOTHROW(t.validate());
    t.sb_min = 0.2;
    t.sb_max = 0.1;
    CHECK_THROWS_AS(t.validate(), Error);
    t = {};
    t.fb_min = 1.2;
    CHECK_THROWS_AS(t.validate(), Error);
    t = {};
    t.eq_max = -0.1;
    CHECK_THROWS_AS(t.validate(), Error);
}

TEST_CASE("global_error counts incompatible labeled comparisons") {
    ComparisonSet set{scenario_with({"size"}), {}};
    std::vector<PreferenceRecord> prefs;
    for (int i = 0; i < 12; ++i) {
        set.comparisons.push_back(synthetic_comparison("c" + std::to_string(i), {0.5}, {0.5}));
    }
    // Ten labeled: three contradict equal quality; c10 and c11 stay unlabeled.
    for (int i = 0; i < 10; ++i) {
        prefs.push_back(record("c" + std::to_string(i), i < 3 ? L::FarBetterA : L::Equivalent));
    }
    CHECK(global_error(set, prefs, kIdentity, {}) == 30.0);

    const auto report = diagnose(set, prefs, kIdentity, {});
    CHECK(report.rows.size() == 10);
    CHECK(report.global_error_percent == 30.0);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].compatible == (i >= 3));
    }

    prefs.resize(3);
    prefs.erase(prefs.begin() + 1, prefs.end());
    CHECK(global_error(set, prefs, kIdentity, {}) == 100.0);
    prefs[0].label = L::Equivalent;
    CHECK(global_error(set, prefs, kIdentity, {}) == 0.0);

    CHECK_THROWS_AS(global_error(set, {}, kIdentity, {}), Error);
    CHECK_THROWS_AS(global_error(set, {record("nope", L::BetterA)}, kIdentity, {}), Error);
}

TEST_CASE("diagnose rows carry qualities and put incompatible rows first") {
    ComparisonSet set{scenario_with({"size", "position"}),
                      {synthetic_comparison("a", {0.2, 0.4}, {0.2, 0.4}),
                       synthetic_comparison("b", {1.0, 1.0}, {0.2, 0.2}),
                       synthetic_comparison("c", {0.7, 0.7}, {0.5, 0.5})}};
    const EvaluationFunction f(ConstraintSet({"size", "position"}), {1.0, 1.0}, 1);
    const auto report = diagnose(set,
                                 {record("a", L::Equivalent), record("b", L::SlightlyBetterB),
                                  record("c", L::BetterA)},
                                 f, {});
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].comparison_id == "b");
    CHECK_FALSE(report.rows[0].compatible);
    CHECK(report.rows[0].quality_a == doctest::Approx(1.0));
    CHECK(report.rows[0].quality_b == doctest::Approx(0.2));
    CHECK(report.rows[0].diff == doctest::Approx(0.8));
    CHECK(report.rows[1].comparison_id == "a");
    CHECK(report.rows[2].comparison_id == "c");
    CHECK(report.global_error_percent == doctest::Approx(100.0 / 3.0));
}

TEST_CASE("duplicate records count once, latest wins") {
    ComparisonSet set{scenario_with({"size"}), {synthetic_comparison("a", {0.9}, {0.1})}};
    const std::vector<PreferenceRecord> prefs{record("a", L::BetterB, "2024-01-01T00:00:00.000Z"),
                                              record("a", L::FarBetterA, "2024-01-01T00:00:05.000Z")};
    CHECK(global_error(set, prefs, kIdentity, {}) == 0.0);
    CHECK(diagnose(set, prefs, kIdentity, {}).rows.size() == 1);
}
