#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "prefeval/error.hpp"
#include "prefeval/json_io.hpp"

using namespace prefeval;
using namespace prefeval::testing;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("prefeval_json_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("comparison set round trip") {
    const auto set = build_comparison_set(ScenarioConfig{}, 6, 3, 31);
    const Json j = to_json(set);
    const auto back = comparison_set_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.scenario == set.scenario);
    REQUIRE(back.comparisons.size() == set.comparisons.size());
    for (std::size_t i = 0; i < set.comparisons.size(); ++i) {
        CHECK(back.comparisons[i].a.satisfactions == set.comparisons[i].a.satisfactions);
        CHECK(back.comparisons[i].b.geometry == set.comparisons[i].b.geometry);
        CHECK(back.comparisons[i].a.provenance == set.comparisons[i].a.provenance);
    }
    // Text round trip keeps every double exactly.
    CHECK(comparison_set_from_json(Json::parse(j.dump())).comparisons[0].a.satisfactions ==
          set.comparisons[0].a.satisfactions);
}

TEST_CASE("comparison set field names") {
    const auto set = build_comparison_set(ScenarioConfig{}, 1, 1, 2);
    const Json j = to_json(set);
    CHECK(j.contains("scenario"));
    const Json& c = j.at("comparisons").at(0);
    for (const char* key : {"id", "object_id", "initial_geometry", "a", "b"}) CHECK(c.contains(key));
    for (const char* key : {"id", "geometry", "satisfactions"}) CHECK(c.at("a").contains(key));
}

TEST_CASE("malformed comparison sets are rejected") {
    const auto set = build_comparison_set(ScenarioConfig{}, 2, 1, 2);
    Json j = to_json(set);

    Json bad = j;
    bad["comparisons"][0]["a"]["satisfactions"].push_back(0.5);
    CHECK_THROWS_AS(comparison_set_from_json(bad), Error);

    bad = j;
    bad["comparisons"][0]["a"]["satisfactions"][0] = 1.5;
    CHECK_THROWS_AS(comparison_set_from_json(bad), Error);

    bad = j;
    bad["comparisons"][1]["id"] = bad["comparisons"][0]["id"];
    CHECK_THROWS_AS(comparison_set_from_json(bad), Error);

    bad = j;
    bad["comparisons"][0].erase("b");
    CHECK_THROWS_AS(comparison_set_from_json(bad), Error);

    bad = j;
    bad["comparisons"][0]["initial_geometry"] = Json::array({Json::array({0, 0}), Json::array({1, 1})});
    CHECK_THROWS_AS(comparison_set_from_json(bad), Error);

    CHECK_THROWS_AS(comparison_set_from_json(Json::array()), Error);
}

TEST_CASE("evaluation function json") {
    const EvaluationFunction f(ConstraintSet({"size", "position"}), {0.25, 1.0}, 3);
    const Json j = to_json(f);
    CHECK(j.at("p") == 3);
    CHECK(function_from_json(j) == f);
    CHECK(function_from_any_json(Json{{"best_function", j}, {"best_error_percent", 0.0}}) == f);

    Json bad = j;
    bad["p"] = 1.5;
    CHECK_THROWS_AS(function_from_json(bad), Error);
    bad = j;
    bad["weights"] = Json::array({0.0, 0.0});
    CHECK_THROWS_AS(function_from_json(bad), Error);
    bad = j;
    bad["weights"] = Json::array({1.0});
    CHECK_THROWS_AS(function_from_json(bad), Error);
    bad = j;
    bad["weights"][0] = "heavy";
    CHECK_THROWS_AS(function_from_json(bad), Error);
}

TEST_CASE("small config objects round trip") {
    CompatibilityThresholds t;
    t.eq_max = 0.04;
    CHECK(thresholds_from_json(to_json(t)) == t);
    const ParameterGrid g{{0.0, 0.5, 1.0}, {1, 2}};
    CHECK(grid_from_json(to_json(g)) == g);
    const TabuConfig tabu = tabu_from_json(Json{{"max_iterations", 12}});
    CHECK(tabu.max_iterations == 12);
    CHECK(tabu.tabu_tenure == TabuConfig{}.tabu_tenure);
    CHECK_THROWS_AS(tabu_from_json(Json{{"max_iterations", 0}}), Error);

    OracleConfig o{default_initial_function()};
    o.noise_rate = 0.25;
    o.seed = 99;
    const auto o2 = oracle_from_json(to_json(o));
    CHECK(o2.hidden_function == o.hidden_function);
    CHECK(o2.noise_rate == 0.25);
    CHECK(o2.seed == 99);
    CHECK(o2.label_cuts == o.label_cuts);
}

TEST_CASE("preference records") {
    PreferenceRecord r = record("c1", PreferenceLabel::SlightlyBetterB, "2024-05-01T10:00:00.000Z");
    r.elapsed_ms = 1234;
    const Json j = to_json(r);
    CHECK(j.at("label") == "SLIGHTLY_BETTER_B");
    CHECK(j.at("source") == "human");
    CHECK(preference_from_json(j) == r);

    Json bad = j;
    bad["label"] = "BEST_EVER";
    CHECK_THROWS_AS(preference_from_json(bad), Error);
    bad = j;
    bad.erase("comparison_id");
    CHECK_THROWS_AS(preference_from_json(bad), Error);
}

TEST_CASE("preference log round trip and torn tail") {
    const auto dir = temp_dir("log");
    const auto path = dir / "prefs.jsonl";
    std::vector<PreferenceRecord> records;
    for (int i = 0; i < 5; ++i) {
        records.push_back(record("c" + std::to_string(i), kAllLabels[static_cast<std::size_t>(i)]));
    }
    write_preference_log(path, records);
    CHECK(read_preference_log(path) == records);

    {
        std::ofstream out(path, std::ios::app);
        out << "\n{\"comparison_id\": \"c9\", \"lab";  // interrupted append
    }
    CHECK(read_preference_log(path) == records);

    {
        std::ofstream out(path, std::ios::app);
        out << "\n";  // the torn line is now complete and malformed
    }
    CHECK_THROWS_AS(read_preference_log(path), Error);

    CHECK_THROWS_AS(read_preference_log(dir / "missing.jsonl"), Error);
    fs::remove_all(dir);
}

TEST_CASE("json files") {
    const auto dir = temp_dir("file");
    const auto path = dir / "x.json";
    write_json_file(path, Json{{"a", 1}});
    CHECK(read_json_file(path) == Json{{"a", 1}});
    CHECK_FALSE(fs::exists(path.string() + ".tmp"));
    std::ofstream(dir / "broken.json") << "{\"a\": ";
    CHECK_THROWS_AS(read_json_file(dir / "broken.json"), Error);
    try {
        read_json_file(dir / "nope.json");
        FAIL("expected failure");
    } catch (const Error& e) {
        CHECK(e.kind() != ErrorKind::InvalidArgument);
    }
    fs::remove_all(dir);
}
