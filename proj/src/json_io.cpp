#include "prefeval/json_io.hpp"

#include <fstream>
#include <sstream>

#include "prefeval/error.hpp"

namespace prefeval {

namespace {

template <typename F>
auto guarded(const char* what, F&& parse) -> decltype(parse()) {
    try {
        return parse();
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument(std::string("malformed ") + what + ": " + e.what());
    }
}

Json candidate_to_json(const GeneralisationCandidate& c) {
    Json provenance = Json::array();
    for (const auto& step : c.provenance) {
        provenance.push_back({{"op", step.name}, {"params", step.params}});
    }
    return {{"id", c.candidate_id},
            {"geometry", to_json(c.geometry)},
            {"satisfactions", c.satisfactions},
            {"provenance", provenance}};
}

GeneralisationCandidate candidate_from_json(const Json& j, const std::string& object_id) {
    GeneralisationCandidate c;
    c.candidate_id = j.at("id").get<std::string>();
    c.object_id = object_id;
    c.geometry = polygon_from_json(j.at("geometry"));
    c.satisfactions = j.at("satisfactions").get<std::vector<double>>();
    if (j.contains("provenance")) {
        for (const auto& step : j.at("provenance")) {
            c.provenance.push_back(
                {step.at("op").get<std::string>(), step.value("params", std::vector<double>{})});
        }
    }
    return c;
}

}  // namespace

Json to_json(const Polygon& poly) {
    Json arr = Json::array();
    for (const auto& p : poly.vertices()) {
        arr.push_back({p.x, p.y});
    }
    return arr;
}

Polygon polygon_from_json(const Json& j) {
    return guarded("polygon", [&] {
        std::vector<Point> pts;
        for (const auto& xy : j) {
            if (!xy.is_array() || xy.size() != 2) {
                throw invalid_argument("polygon vertices must be [x, y] pairs");
            }
            pts.push_back({xy[0].get<double>(), xy[1].get<double>()});
        }
        return Polygon(std::move(pts));
    });
}

Json to_json(const EvaluationFunction& f) {
    return {{"constraints", f.constraints().names()}, {"weights", f.weights()}, {"p", f.power()}};
}

EvaluationFunction function_from_json(const Json& j) {
    return guarded("evaluation function", [&] {
        if (!j.at("p").is_number_integer()) {
            throw invalid_argument("power p must be an integer");
        }
        return EvaluationFunction(ConstraintSet(j.at("constraints").get<std::vector<std::string>>()),
                                  j.at("weights").get<std::vector<double>>(), j.at("p").get<int>());
    });
}

EvaluationFunction function_from_any_json(const Json& j) {
    if (j.is_object() && j.contains("best_function")) {
        return function_from_json(j.at("best_function"));
    }
    return function_from_json(j);
}

Json to_json(const ScenarioConfig& cfg) {
    return {{"scale_denominator", cfg.scale_denominator},
            {"min_area_m2", cfg.min_area_m2},
            {"min_edge_m", cfg.min_edge_m},
            {"position_tolerance_m", cfg.position_tolerance_m},
            {"orientation_tolerance_deg", cfg.orientation_tolerance_deg},
            {"constraints", cfg.constraint_set.names()}};
}

ScenarioConfig scenario_from_json(const Json& j) {
    return guarded("scenario", [&] {
        ScenarioConfig cfg;
        cfg.scale_denominator = j.value("scale_denominator", cfg.scale_denominator);
        cfg.min_area_m2 = j.value("min_area_m2", cfg.min_area_m2);
        cfg.min_edge_m = j.value("min_edge_m", cfg.min_edge_m);
        cfg.position_tolerance_m = j.value("position_tolerance_m", cfg.position_tolerance_m);
        cfg.orientation_tolerance_deg =
            j.value("orientation_tolerance_deg", cfg.orientation_tolerance_deg);
        if (j.contains("constraints")) {
            cfg.constraint_set = ConstraintSet(j.at("constraints").get<std::vector<std::string>>());
        }
        cfg.validate();
        return cfg;
    });
}

Json to_json(const ComparisonSet& set) {
    Json comparisons = Json::array();
    for (const auto& c : set.comparisons) {
        comparisons.push_back({{"id", c.comparison_id},
                               {"object_id", c.object_id},
                               {"initial_geometry", to_json(c.initial)},
                               {"a", candidate_to_json(c.a)},
                               {"b", candidate_to_json(c.b)}});
    }
    return {{"scenario", to_json(set.scenario)},
            {"constraints", set.scenario.constraint_set.names()},
            {"comparisons", comparisons}};
}

ComparisonSet comparison_set_from_json(const Json& j) {
    return guarded("comparison set", [&] {
        ComparisonSet set;
        set.scenario = scenario_from_json(j.at("scenario"));
        if (j.contains("constraints")) {
            const ConstraintSet top(j.at("constraints").get<std::vector<std::string>>());
            if (!(top == set.scenario.constraint_set)) {
                throw invalid_argument("top-level constraints disagree with the scenario");
            }
        }
        for (const auto& cj : j.at("comparisons")) {
            Comparison c;
            c.comparison_id = cj.at("id").get<std::string>();
            c.object_id = cj.at("object_id").get<std::string>();
            c.initial = polygon_from_json(cj.at("initial_geometry"));
            c.a = candidate_from_json(cj.at("a"), c.object_id);
            c.b = candidate_from_json(cj.at("b"), c.object_id);
            set.comparisons.push_back(std::move(c));
        }
        set.validate();
        return set;
    });
}

Json to_json(const PreferenceRecord& rec) {
    return {{"comparison_id", rec.comparison_id},
            {"label", std::string(to_string(rec.label))},
            {"source", std::string(to_string(rec.source))},
            {"elapsed_ms", rec.elapsed_ms ? Json(*rec.elapsed_ms) : Json(nullptr)},
            {"created_at", rec.created_at}};
}

PreferenceRecord preference_from_json(const Json& j) {
    return guarded("preference record", [&] {
        PreferenceRecord rec;
        rec.comparison_id = j.at("comparison_id").get<std::string>();
        const auto symbol = j.at("label").get<std::string>();
        const auto label = parse_label(symbol);
        if (!label) {
            throw invalid_argument("unknown label '" + symbol + "'; expected one of " +
                                   valid_label_symbols());
        }
        rec.label = *label;
        const auto source = parse_source(j.value("source", std::string("human")));
        if (!source) {
            throw invalid_argument("source must be \"human\" or \"oracle\"");
        }
        rec.source = *source;
        if (j.contains("elapsed_ms") && !j.at("elapsed_ms").is_null()) {
            rec.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
        }
        rec.created_at = j.value("created_at", std::string());
        return rec;
    });
}

Json to_json(const CompatibilityThresholds& t) {
    return {{"eq_max", t.eq_max}, {"sb_min", t.sb_min}, {"sb_max", t.sb_max},
            {"b_min", t.b_min},   {"b_max", t.b_max},   {"fb_min", t.fb_min}};
}

CompatibilityThresholds thresholds_from_json(const Json& j) {
    return guarded("thresholds", [&] {
        CompatibilityThresholds t;
        t.eq_max = j.value("eq_max", t.eq_max);
        t.sb_min = j.value("sb_min", t.sb_min);
        t.sb_max = j.value("sb_max", t.sb_max);
        t.b_min = j.value("b_min", t.b_min);
        t.b_max = j.value("b_max", t.b_max);
        t.fb_min = j.value("fb_min", t.fb_min);
        t.validate();
        return t;
    });
}

Json to_json(const CompatibilityReport& report) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"comparison_id", r.comparison_id},
                        {"label", std::string(to_string(r.label))},
                        {"quality_a", r.quality_a},
                        {"quality_b", r.quality_b},
                        {"diff", r.diff},
                        {"compatible", r.compatible}});
    }
    return {{"global_error_percent", report.global_error_percent}, {"rows", rows}};
}

Json to_json(const ParameterGrid& grid) {
    return {{"weight_values", grid.weight_values}, {"p_values", grid.p_values}};
}

ParameterGrid grid_from_json(const Json& j) {
    return guarded("parameter grid", [&] {
        ParameterGrid g = ParameterGrid::standard();
        if (j.contains("weight_values")) {
            g.weight_values = j.at("weight_values").get<std::vector<double>>();
        }
        if (j.contains("p_values")) {
            g.p_values = j.at("p_values").get<std::vector<int>>();
        }
        g.validate();
        return g;
    });
}

Json to_json(const TabuConfig& cfg) {
    return {{"max_iterations", cfg.max_iterations},
            {"tabu_tenure", cfg.tabu_tenure},
            {"seed", cfg.seed},
            {"stop_at_zero", cfg.stop_at_zero}};
}

TabuConfig tabu_from_json(const Json& j) {
    return guarded("tabu configuration", [&] {
        TabuConfig cfg;
        cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
        cfg.tabu_tenure = j.value("tabu_tenure", cfg.tabu_tenure);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.stop_at_zero = j.value("stop_at_zero", cfg.stop_at_zero);
        cfg.validate();
        return cfg;
    });
}

Json to_json(const LearnResult& result) {
    Json trajectory = Json::array();
    for (const auto& pt : result.trajectory) {
        trajectory.push_back({pt.iteration, pt.current_error, pt.best_error});
    }
    return {{"best_function", to_json(result.best)},
            {"best_error_percent", result.best_error_percent},
            {"initial_error_percent", result.initial_error_percent},
            {"trajectory", trajectory},
            {"evaluations", result.evaluations}};
}

LearnResult learn_result_from_json(const Json& j) {
    return guarded("learn result", [&] {
        LearnResult r{function_from_json(j.at("best_function")), 0.0, 0.0, {}, 0};
        r.best_error_percent = j.at("best_error_percent").get<double>();
        r.initial_error_percent = j.at("initial_error_percent").get<double>();
        for (const auto& pt : j.at("trajectory")) {
            r.trajectory.push_back(
                {pt.at(0).get<int>(), pt.at(1).get<double>(), pt.at(2).get<double>()});
        }
        r.evaluations = j.at("evaluations").get<std::size_t>();
        return r;
    });
}

Json to_json(const OracleConfig& cfg) {
    return {{"hidden_function", to_json(cfg.hidden_function)},
            {"label_cuts", cfg.label_cuts},
            {"noise_rate", cfg.noise_rate},
            {"seed", cfg.seed}};
}

OracleConfig oracle_from_json(const Json& j) {
    return guarded("oracle configuration", [&] {
        OracleConfig cfg{function_from_json(j.at("hidden_function"))};
        if (j.contains("label_cuts")) {
            const auto cuts = j.at("label_cuts").get<std::vector<double>>();
            if (cuts.size() != 3) {
                throw invalid_argument("label_cuts must hold exactly three values");
            }
            cfg.label_cuts = {cuts[0], cuts[1], cuts[2]};
        }
        cfg.noise_rate = j.value("noise_rate", 0.0);
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.validate();
        return cfg;
    });
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
        }
        out << j.dump(2) << '\n';
        out.flush();
        if (!out) {
            throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot replace '" + path.string() + "': " + ec.message());
    }
}

std::vector<PreferenceRecord> read_preference_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<PreferenceRecord> out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        const bool terminated = end != std::string::npos;
        const std::string line = text.substr(start, terminated ? end - start : std::string::npos);
        start = terminated ? end + 1 : text.size();
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(preference_from_json(Json::parse(line)));
        } catch (const std::exception& e) {
            if (!terminated) {
                break;  // torn final append
            }
            throw invalid_argument("'" + path.string() + "' line " + std::to_string(line_no) +
                                   ": " + e.what());
        }
    }
    return out;
}

void write_preference_log(const std::filesystem::path& path,
                          const std::vector<PreferenceRecord>& records) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    }
    for (const auto& rec : records) {
        out << to_json(rec).dump() << '\n';
    }
    out.flush();
    if (!out) {
        throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
    }
}

}  // namespace prefeval
