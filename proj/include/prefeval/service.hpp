#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "prefeval/compatibility.hpp"
#include "prefeval/json_io.hpp"
#include "prefeval/learner.hpp"
#include "prefeval/preference.hpp"

namespace httplib {
class Server;
}

namespace prefeval {

struct ServiceConfig {
    int port = 8080;
    std::filesystem::path data_dir = "data";
    std::optional<std::filesystem::path> ui_dir;
    CompatibilityThresholds thresholds;
    ParameterGrid grid = ParameterGrid::standard();
    TabuConfig tabu;
    EvaluationFunction init_function = default_initial_function();
    /// Present A and B in a pseudo-random, per-comparison order.
    bool randomize_sides = true;
    std::uint64_t side_seed = 0;
};

/// Reads a JSON config file (any subset of the fields above), then applies
/// PREFEVAL_PORT and PREFEVAL_DATA_DIR from the environment.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& path);

struct Progress {
    std::size_t answered = 0;
    std::size_t total = 0;
};

struct Presentation {
    const Comparison* comparison = nullptr;  ///< null once the session is complete
    bool swapped = false;                    ///< A and B exchanged for display
    Progress progress;
};

enum class JobStatus { Queued, Running, Done, Failed };
std::string_view to_string(JobStatus status);

struct LearnJobSnapshot {
    std::string job_id;
    std::string session_id;
    JobStatus status = JobStatus::Queued;
    std::optional<LearnResult> result;
    std::optional<std::string> error_message;
    EvaluationFunction init_function = default_initial_function();
    CompatibilityThresholds thresholds;
    std::size_t preference_count = 0;
};

Json to_json(const LearnJobSnapshot& job);

/// The machine side of the preference dialogue: sessions over comparison-set
/// files, an append-only preference log per session, and background learning
/// jobs. All state lives under data_dir and is reloaded on construction.
class Service {
public:
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    const ServiceConfig& config() const noexcept { return config_; }

    /// Opens a session over a comparison-set file. With no id, one is assigned.
    std::string create_session(const std::filesystem::path& comparison_set_path,
                               std::optional<std::string> session_id = std::nullopt);
    /// Id of an existing session over this file, if any.
    std::optional<std::string> find_session_for(const std::filesystem::path& comparison_set_path) const;
    std::vector<std::string> session_ids() const;

    Presentation next(const std::string& session_id) const;
    Progress progress(const std::string& session_id) const;

    /// Records a label given in presentation order; it is un-mirrored when the
    /// sides were swapped for display.
    Progress submit(const std::string& session_id, const std::string& comparison_id,
                    const std::string& label_symbol, std::optional<std::int64_t> elapsed_ms = {});

    /// Effective (deduplicated) preferences of a session.
    std::vector<PreferenceRecord> preferences(const std::string& session_id) const;

    /// Starts tabu search in the background. `params` may carry "grid", "tabu",
    /// "thresholds" and "init_function" objects; absent ones use the config.
    std::string start_learn(const std::string& session_id, const Json& params);
    LearnJobSnapshot job(const std::string& job_id) const;
    /// Blocks until no job of any session is queued or running.
    void wait_for_jobs();

    CompatibilityReport report(const std::string& session_id, const std::string& which) const;
    /// {"kind": "initial"|"learnt", "function": {...}}
    Json current_function(const std::string& session_id) const;

    /// Registers every HTTP route on `server`.
    void install_routes(httplib::Server& server);

private:
    struct JobState;
    struct Session;

    Session& session(const std::string& id) const;
    std::shared_ptr<JobState> latest_done_job(const Session& s) const;
    bool presented_swapped(const std::string& session_id, const std::string& comparison_id) const;
    void load_sessions();
    void run_job(std::shared_ptr<JobState> job, std::shared_ptr<const ComparisonSet> set,
                 std::vector<PreferenceRecord> prefs, ParameterGrid grid, TabuConfig tabu);
    void persist_job(const JobState& job) const;
    std::filesystem::path session_dir(const std::string& id) const;

    ServiceConfig config_;
    mutable std::mutex mutex_;  // guards sessions_, jobs_, workers_
    std::map<std::string, std::unique_ptr<Session>, std::less<>> sessions_;
    std::map<std::string, std::shared_ptr<JobState>, std::less<>> jobs_;
    std::vector<std::thread> workers_;
};

}  // namespace prefeval
