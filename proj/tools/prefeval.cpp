// Command-line entry points: generate comparison sets, label them with a
// simulated user, learn an evaluation function, evaluate it, and serve the
// interactive dialogue over HTTP.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"
#include "prefeval/error.hpp"
#include "prefeval/json_io.hpp"
#include "prefeval/learner.hpp"
#include "prefeval/oracle_user.hpp"
#include "prefeval/service.hpp"

using namespace prefeval;

namespace {

httplib::Server* g_server = nullptr;

void handle_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", v);
    return buf;
}

int cmd_gen(int objects, int pairs, std::uint64_t seed, int scale, const std::string& out) {
    ScenarioConfig cfg;
    cfg.scale_denominator = scale;
    const auto set = build_comparison_set(cfg, objects, pairs, seed);
    write_json_file(out, to_json(set));
    std::cout << "wrote " << set.comparisons.size() << " comparisons (" << objects << " objects x "
              << pairs << " pairs) to " << out << '\n';
    return 0;
}

int cmd_simulate(const std::string& comps, const std::string& oracle, const std::string& out) {
    const auto set = comparison_set_from_json(read_json_file(comps));
    const auto cfg = oracle_from_json(read_json_file(oracle));
    const auto records = label_set(set, cfg);
    write_preference_log(out, records);
    std::cout << "wrote " << records.size() << " oracle preferences to " << out << '\n';
    return 0;
}

int cmd_learn(const std::string& comps, const std::string& prefs_path,
              const std::optional<std::string>& init_path,
              const std::optional<std::string>& thresholds_path,
              const std::optional<std::string>& grid_path, TabuConfig tabu, const std::string& out) {
    const auto set = comparison_set_from_json(read_json_file(comps));
    const auto prefs = read_preference_log(prefs_path);
    if (prefs.empty()) {
        throw invalid_argument("'" + prefs_path + "' holds no preferences");
    }
    const auto grid = grid_path ? grid_from_json(read_json_file(*grid_path)) : ParameterGrid::standard();
    const auto thresholds =
        thresholds_path ? thresholds_from_json(read_json_file(*thresholds_path)) : CompatibilityThresholds{};
    const auto expert =
        init_path ? function_from_any_json(read_json_file(*init_path)) : default_initial_function();
    const auto init = snap_to_grid(expert, grid);

    const auto result = tabu_search(set, prefs, init, thresholds, grid, tabu);
    Json j = to_json(result);
    j["initial_function"] = to_json(init);
    j["tabu"] = to_json(tabu);
    write_json_file(out, j);
    std::cout << "initial error: " << percent(result.initial_error_percent) << '\n'
              << "best error: " << percent(result.best_error_percent) << '\n'
              << "iterations: " << result.trajectory.back().iteration
              << ", evaluations: " << result.evaluations << '\n';
    return 0;
}

int cmd_eval(const std::string& comps, const std::string& prefs_path, const std::string& function_path,
             const std::optional<std::string>& thresholds_path,
             const std::optional<std::string>& report_path) {
    const auto set = comparison_set_from_json(read_json_file(comps));
    const auto prefs = read_preference_log(prefs_path);
    const auto f = function_from_any_json(read_json_file(function_path));
    const auto thresholds =
        thresholds_path ? thresholds_from_json(read_json_file(*thresholds_path)) : CompatibilityThresholds{};
    const auto report = diagnose(set, prefs, f, thresholds);
    if (report_path) {
        write_json_file(*report_path, to_json(report));
    }
    std::size_t incompatible = 0;
    for (const auto& r : report.rows) incompatible += r.compatible ? 0 : 1;
    std::cout << "global error: " << percent(report.global_error_percent) << " (" << incompatible
              << " of " << report.rows.size() << " comparisons incompatible)\n";
    return 0;
}

int cmd_serve(const std::string& comps, const std::optional<std::string>& data_dir,
              std::optional<int> port, const std::optional<std::string>& config_path,
              const std::optional<std::string>& ui_dir) {
    auto cfg = load_service_config(config_path);
    if (data_dir) cfg.data_dir = *data_dir;
    if (port) cfg.port = *port;
    if (ui_dir) cfg.ui_dir = *ui_dir;
    if (!std::filesystem::exists(comps)) {
        throw Error(ErrorKind::NotFound, "comparison set '" + comps + "' not found");
    }

    Service service(cfg);
    std::string session_id;
    if (auto existing = service.find_session_for(comps)) {
        session_id = *existing;
    } else {
        session_id = service.create_session(comps);
    }

    httplib::Server server;
    service.install_routes(server);
    int bound = cfg.port;
    if (cfg.port == 0) {
        bound = server.bind_to_any_port("127.0.0.1");
    } else if (!server.bind_to_port("0.0.0.0", cfg.port)) {
        bound = -1;
    }
    if (bound < 0) {
        throw Error(ErrorKind::Io, "cannot listen on port " + std::to_string(cfg.port));
    }
    const auto p = service.progress(session_id);
    std::cout << "session " << session_id << " (" << p.answered << "/" << p.total
              << " answered) listening on port " << bound << std::endl;

    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    server.listen_after_bind();
    g_server = nullptr;
    service.wait_for_jobs();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn cartographic generalisation evaluation functions from graded pairwise preferences"};
    app.require_subcommand(1);

    int objects = 25;
    int pairs = 4;
    std::uint64_t gen_seed = 1;
    int scale = 25000;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a comparison set");
    gen->add_option("--objects", objects, "Number of buildings")->check(CLI::PositiveNumber);
    gen->add_option("--pairs", pairs, "Comparisons per building")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--scale", scale, "Target scale denominator")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "Output comparison-set JSON")->required();

    std::string comps;
    std::string oracle;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Label a comparison set with a simulated user");
    simulate->add_option("--comps", comps, "Comparison-set JSON")->required();
    simulate->add_option("--oracle", oracle, "Oracle configuration JSON")->required();
    simulate->add_option("--out", sim_out, "Output preference log (JSONL)")->required();

    std::string prefs;
    std::optional<std::string> init_path;
    std::optional<std::string> thresholds_path;
    std::optional<std::string> grid_path;
    TabuConfig tabu;
    std::string learn_out;
    auto* learn = app.add_subcommand("learn", "Fit weights and power by tabu search");
    learn->add_option("--comps", comps, "Comparison-set JSON")->required();
    learn->add_option("--prefs", prefs, "Preference log (JSONL)")->required();
    learn->add_option("--init", init_path, "Initial (expert) function JSON");
    learn->add_option("--thresholds", thresholds_path, "Compatibility thresholds JSON");
    learn->add_option("--grid", grid_path, "Parameter grid JSON");
    learn->add_option("--max-iters", tabu.max_iterations, "Iteration budget")->check(CLI::PositiveNumber);
    learn->add_option("--tenure", tabu.tabu_tenure, "Tabu tenure")->check(CLI::NonNegativeNumber);
    learn->add_option("--seed", tabu.seed, "Search seed");
    learn->add_option("--out", learn_out, "Output learn-result JSON")->required();

    std::string function_path;
    std::optional<std::string> report_path;
    auto* eval = app.add_subcommand("eval", "Global error and compatibility report of a function");
    eval->add_option("--comps", comps, "Comparison-set JSON")->required();
    eval->add_option("--prefs", prefs, "Preference log (JSONL)")->required();
    eval->add_option("--function", function_path, "Function JSON or learn-result JSON")->required();
    eval->add_option("--thresholds", thresholds_path, "Compatibility thresholds JSON");
    eval->add_option("--report", report_path, "Output report JSON");

    std::optional<std::string> data_dir;
    std::optional<int> port;
    std::optional<std::string> config_path;
    std::optional<std::string> ui_dir;
    auto* serve = app.add_subcommand("serve", "Run the preference-capture service");
    serve->add_option("--comps", comps, "Comparison-set JSON")->required();
    serve->add_option("--data-dir", data_dir, "Session storage directory");
    serve->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve->add_option("--config", config_path, "Service configuration JSON");
    serve->add_option("--ui-dir", ui_dir, "Static comparison UI bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen) return cmd_gen(objects, pairs, gen_seed, scale, gen_out);
        if (*simulate) return cmd_simulate(comps, oracle, sim_out);
        if (*learn) return cmd_learn(comps, prefs, init_path, thresholds_path, grid_path, tabu, learn_out);
        if (*eval) return cmd_eval(comps, prefs, function_path, thresholds_path, report_path);
        if (*serve) return cmd_serve(comps, data_dir, port, config_path, ui_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
