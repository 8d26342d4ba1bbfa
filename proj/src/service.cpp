#include "prefeval/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "httplib.h"
#include "prefeval/error.hpp"
#include "prefeval/random.hpp"

namespace prefeval {

namespace fs = std::filesystem;

struct Service::JobState {
    mutable std::mutex mutex;
    LearnJobSnapshot snapshot;
};

struct Service::Session {
    std::string id;
    fs::path set_path;
    std::string created_at;
    std::shared_ptr<const ComparisonSet> set;

    mutable std::mutex mutex;  // guards everything below
    std::vector<PreferenceRecord> log;
    std::set<std::string, std::less<>> answered;
    std::vector<std::shared_ptr<JobState>> jobs;
};

namespace {

void append_line_durably(const fs::path& path, const std::string& line) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "': " + std::strerror(errno));
    }
    const std::string data = line + "\n";
    std::size_t written = 0;
    while (written < data.size()) {
        const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            const std::string msg = std::strerror(errno);
            ::close(fd);
            throw Error(ErrorKind::Io, "append to '" + path.string() + "' failed: " + msg);
        }
        written += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
}

std::optional<JobStatus> parse_job_status(std::string_view s) {
    for (auto st : {JobStatus::Queued, JobStatus::Running, JobStatus::Done, JobStatus::Failed}) {
        if (to_string(st) == s) return st;
    }
    return std::nullopt;
}

Json presented_candidate(const GeneralisationCandidate& c) {
    return {{"id", c.candidate_id}, {"geometry", to_json(c.geometry)}};
}

Json progress_json(const Progress& p) { return {{"answered", p.answered}, {"total", p.total}}; }

int http_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return 400;
        case ErrorKind::NotFound: return 404;
        case ErrorKind::Conflict: return 409;
        case ErrorKind::Io: return 500;
    }
    return 500;
}

void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename Handler>
auto guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const Error& e) {
            reply(res, http_status(e.kind()), {{"error", e.what()}});
        } catch (const std::exception& e) {
            reply(res, 500, {{"error", e.what()}});
        }
    };
}

Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) {
        return Json::object();
    }
    try {
        auto j = Json::parse(req.body);
        if (!j.is_object()) {
            throw invalid_argument("request body must be a JSON object");
        }
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_argument(std::string("request body is not valid JSON: ") + e.what());
    }
}

}  // namespace

std::string_view to_string(JobStatus status) {
    switch (status) {
        case JobStatus::Queued: return "queued";
        case JobStatus::Running: return "running";
        case JobStatus::Done: return "done";
        case JobStatus::Failed: return "failed";
    }
    return "failed";
}

Json to_json(const LearnJobSnapshot& job) {
    Json j{{"job_id", job.job_id},
           {"session_id", job.session_id},
           {"status", std::string(to_string(job.status))},
           {"init_function", to_json(job.init_function)},
           {"thresholds", to_json(job.thresholds)},
           {"preference_count", job.preference_count}};
    if (job.result) j["result"] = to_json(*job.result);
    if (job.error_message) j["error_message"] = *job.error_message;
    return j;
}

ServiceConfig load_service_config(const std::optional<fs::path>& path) {
    ServiceConfig cfg;
    if (path) {
        const Json j = read_json_file(*path);
        try {
            cfg.port = j.value("port", cfg.port);
            if (j.contains("data_dir")) cfg.data_dir = j.at("data_dir").get<std::string>();
            if (j.contains("ui_dir")) cfg.ui_dir = j.at("ui_dir").get<std::string>();
            cfg.randomize_sides = j.value("randomize_sides", cfg.randomize_sides);
            cfg.side_seed = j.value("side_seed", cfg.side_seed);
        } catch (const nlohmann::json::exception& e) {
            throw invalid_argument(std::string("malformed service config: ") + e.what());
        }
        if (j.contains("thresholds")) cfg.thresholds = thresholds_from_json(j.at("thresholds"));
        if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
        if (j.contains("tabu")) cfg.tabu = tabu_from_json(j.at("tabu"));
        if (j.contains("init_function")) cfg.init_function = function_from_json(j.at("init_function"));
    }
    if (const char* port = std::getenv("PREFEVAL_PORT"); port && *port) {
        try {
            cfg.port = std::stoi(port);
        } catch (const std::exception&) {
            throw invalid_argument(std::string("PREFEVAL_PORT is not a number: ") + port);
        }
    }
    if (const char* dir = std::getenv("PREFEVAL_DATA_DIR"); dir && *dir) {
        cfg.data_dir = dir;
    }
    return cfg;
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {
    config_.thresholds.validate();
    config_.grid.validate();
    config_.tabu.validate();
    std::error_code ec;
    fs::create_directories(config_.data_dir / "sessions", ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot create data directory '" + config_.data_dir.string() +
                                       "': " + ec.message());
    }
    load_sessions();
}

Service::~Service() {
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(mutex_);
        workers.swap(workers_);
    }
    for (auto& w : workers) {
        if (w.joinable()) w.join();
    }
}

fs::path Service::session_dir(const std::string& id) const {
    return config_.data_dir / "sessions" / id;
}

void Service::load_sessions() {
    for (const auto& entry : fs::directory_iterator(config_.data_dir / "sessions")) {
        const fs::path meta = entry.path() / "session.json";
        if (!entry.is_directory() || !fs::exists(meta)) {
            continue;
        }
        const Json j = read_json_file(meta);
        auto s = std::make_unique<Session>();
        s->id = j.at("session_id").get<std::string>();
        s->set_path = j.at("comparison_set_path").get<std::string>();
        s->created_at = j.value("created_at", std::string());
        s->set = std::make_shared<const ComparisonSet>(
            comparison_set_from_json(read_json_file(s->set_path)));

        const fs::path log_path = entry.path() / "preferences.jsonl";
        if (fs::exists(log_path)) {
            s->log = read_preference_log(log_path);
            for (const auto& rec : s->log) {
                s->answered.insert(rec.comparison_id);
            }
        }

        const fs::path jobs_dir = entry.path() / "jobs";
        if (fs::exists(jobs_dir)) {
            std::vector<fs::path> files;
            for (const auto& f : fs::directory_iterator(jobs_dir)) {
                if (f.path().extension() == ".json") files.push_back(f.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                const Json jj = read_json_file(f);
                auto job = std::make_shared<JobState>();
                auto& snap = job->snapshot;
                snap.job_id = jj.at("job_id").get<std::string>();
                snap.session_id = s->id;
                snap.status = parse_job_status(jj.at("status").get<std::string>()).value_or(JobStatus::Failed);
                snap.init_function = function_from_json(jj.at("init_function"));
                snap.thresholds = thresholds_from_json(jj.at("thresholds"));
                snap.preference_count = jj.value("preference_count", std::size_t{0});
                if (jj.contains("result")) snap.result = learn_result_from_json(jj.at("result"));
                if (jj.contains("error_message")) snap.error_message = jj.at("error_message").get<std::string>();
                s->jobs.push_back(job);
                jobs_.emplace(snap.job_id, job);
            }
            // Job files are named by sequence number; keep numeric order.
            std::sort(s->jobs.begin(), s->jobs.end(), [](const auto& a, const auto& b) {
                return a->snapshot.job_id.size() != b->snapshot.job_id.size()
                           ? a->snapshot.job_id.size() < b->snapshot.job_id.size()
                           : a->snapshot.job_id < b->snapshot.job_id;
            });
        }
        const std::string id = s->id;
        sessions_.emplace(id, std::move(s));
    }
}

std::string Service::create_session(const fs::path& comparison_set_path,
                                    std::optional<std::string> session_id) {
    std::error_code ec;
    const fs::path abs = fs::absolute(comparison_set_path, ec);
    if (!fs::exists(abs)) {
        throw Error(ErrorKind::NotFound, "comparison set '" + comparison_set_path.string() + "' not found");
    }
    auto set = std::make_shared<const ComparisonSet>(comparison_set_from_json(read_json_file(abs)));

    std::lock_guard lock(mutex_);
    std::string id;
    if (session_id) {
        id = *session_id;
        if (id.empty() || id.find_first_of("/\\. ") != std::string::npos) {
            throw invalid_argument("session id must be non-empty without '/', '\\', '.' or spaces");
        }
        if (sessions_.contains(id)) {
            throw Error(ErrorKind::Conflict, "session '" + id + "' already exists");
        }
    } else {
        for (std::size_t k = sessions_.size() + 1;; ++k) {
            id = "s" + std::to_string(k);
            if (!sessions_.contains(id)) break;
        }
    }

    auto s = std::make_unique<Session>();
    s->id = id;
    s->set_path = abs;
    s->created_at = utc_timestamp_now();
    s->set = std::move(set);
    fs::create_directories(session_dir(id));
    write_json_file(session_dir(id) / "session.json",
                    {{"session_id", id},
                     {"comparison_set_path", abs.string()},
                     {"created_at", s->created_at}});
    sessions_.emplace(id, std::move(s));
    return id;
}

std::optional<std::string> Service::find_session_for(const fs::path& comparison_set_path) const {
    std::error_code ec;
    const fs::path abs = fs::absolute(comparison_set_path, ec);
    std::lock_guard lock(mutex_);
    for (const auto& [id, s] : sessions_) {
        if (s->set_path == abs) return id;
    }
    return std::nullopt;
}

std::vector<std::string> Service::session_ids() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> ids;
    for (const auto& [id, s] : sessions_) ids.push_back(id);
    return ids;
}

Service::Session& Service::session(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw Error(ErrorKind::NotFound, "unknown session '" + id + "'");
    }
    return *it->second;
}

bool Service::presented_swapped(const std::string& session_id, const std::string& comparison_id) const {
    if (!config_.randomize_sides) {
        return false;
    }
    // Stable per (session, comparison), so repeated reads and restarts agree.
    return (mix_seed(config_.side_seed, hash_id(session_id + "\n" + comparison_id)) & 1U) != 0;
}

Progress Service::progress(const std::string& session_id) const {
    Session& s = session(session_id);
    std::lock_guard lock(s.mutex);
    return {s.answered.size(), s.set->comparisons.size()};
}

Presentation Service::next(const std::string& session_id) const {
    Session& s = session(session_id);
    std::lock_guard lock(s.mutex);
    Presentation p;
    p.progress = {s.answered.size(), s.set->comparisons.size()};
    p.comparison = next_unanswered(*s.set, s.answered);
    if (p.comparison) {
        p.swapped = presented_swapped(session_id, p.comparison->comparison_id);
    }
    return p;
}

Progress Service::submit(const std::string& session_id, const std::string& comparison_id,
                         const std::string& label_symbol, std::optional<std::int64_t> elapsed_ms) {
    Session& s = session(session_id);
    const auto label = parse_label(label_symbol);
    if (!label) {
        throw invalid_argument("unknown label '" + label_symbol + "'; expected one of " +
                               valid_label_symbols());
    }
    if (s.set->find(comparison_id) == nullptr) {
        throw Error(ErrorKind::NotFound, "comparison '" + comparison_id + "' is not part of session '" +
                                             session_id + "'");
    }
    PreferenceRecord rec;
    rec.comparison_id = comparison_id;
    rec.label = presented_swapped(session_id, comparison_id) ? mirror(*label) : *label;
    rec.source = PreferenceSource::Human;
    rec.elapsed_ms = elapsed_ms;

    std::lock_guard lock(s.mutex);
    rec.created_at = utc_timestamp_now();
    append_line_durably(session_dir(session_id) / "preferences.jsonl", to_json(rec).dump());
    s.log.push_back(rec);
    s.answered.insert(comparison_id);
    return {s.answered.size(), s.set->comparisons.size()};
}

std::vector<PreferenceRecord> Service::preferences(const std::string& session_id) const {
    Session& s = session(session_id);
    std::lock_guard lock(s.mutex);
    return effective_preferences(s.log);
}

std::string Service::start_learn(const std::string& session_id, const Json& params) {
    Session& s = session(session_id);

    const ParameterGrid grid = params.contains("grid") ? grid_from_json(params.at("grid")) : config_.grid;
    const TabuConfig tabu = params.contains("tabu") ? tabu_from_json(params.at("tabu")) : config_.tabu;
    const CompatibilityThresholds thresholds =
        params.contains("thresholds") ? thresholds_from_json(params.at("thresholds")) : config_.thresholds;
    const EvaluationFunction init = snap_to_grid(
        params.contains("init_function") ? function_from_json(params.at("init_function"))
                                         : config_.init_function,
        grid);
    s.set->scenario.constraint_set.projection_of(init.constraints());

    std::shared_ptr<JobState> job;
    std::vector<PreferenceRecord> prefs;
    {
        std::lock_guard lock(s.mutex);
        prefs = effective_preferences(s.log);
        if (prefs.empty()) {
            throw Error(ErrorKind::Conflict, "session '" + session_id + "' has no preferences yet");
        }
        if (!s.jobs.empty()) {
            std::lock_guard jl(s.jobs.back()->mutex);
            const auto st = s.jobs.back()->snapshot.status;
            if (st == JobStatus::Queued || st == JobStatus::Running) {
                throw Error(ErrorKind::Conflict, "a learning job is already running for session '" +
                                                     session_id + "'");
            }
        }
        job = std::make_shared<JobState>();
        auto& snap = job->snapshot;
        snap.job_id = session_id + "-job" + std::to_string(s.jobs.size() + 1);
        snap.session_id = session_id;
        snap.status = JobStatus::Queued;
        snap.init_function = init;
        snap.thresholds = thresholds;
        snap.preference_count = prefs.size();
        s.jobs.push_back(job);
    }
    const std::string job_id = job->snapshot.job_id;
    std::lock_guard lock(mutex_);
    jobs_.emplace(job_id, job);
    workers_.emplace_back(&Service::run_job, this, job, s.set, std::move(prefs), grid, tabu);
    return job_id;
}

void Service::run_job(std::shared_ptr<JobState> job, std::shared_ptr<const ComparisonSet> set,
                      std::vector<PreferenceRecord> prefs, ParameterGrid grid, TabuConfig tabu) {
    EvaluationFunction init = default_initial_function();
    CompatibilityThresholds thresholds;
    {
        std::lock_guard lock(job->mutex);
        job->snapshot.status = JobStatus::Running;
        init = job->snapshot.init_function;
        thresholds = job->snapshot.thresholds;
    }
    std::optional<LearnResult> result;
    std::optional<std::string> failure;
    try {
        result = tabu_search(*set, prefs, init, thresholds, grid, tabu);
    } catch (const std::exception& e) {
        failure = e.what();
    }
    {
        std::lock_guard lock(job->mutex);
        job->snapshot.result = std::move(result);
        job->snapshot.error_message = std::move(failure);
        job->snapshot.status = job->snapshot.result ? JobStatus::Done : JobStatus::Failed;
    }
    try {
        persist_job(*job);
    } catch (const std::exception&) {
        // The in-memory snapshot stays authoritative for this process.
    }
}

void Service::persist_job(const JobState& job) const {
    LearnJobSnapshot snap;
    {
        std::lock_guard lock(job.mutex);
        snap = job.snapshot;
    }
    const fs::path dir = session_dir(snap.session_id) / "jobs";
    fs::create_directories(dir);
    write_json_file(dir / (snap.job_id + ".json"), to_json(snap));
}

LearnJobSnapshot Service::job(const std::string& job_id) const {
    std::shared_ptr<JobState> job;
    {
        std::lock_guard lock(mutex_);
        auto it = jobs_.find(job_id);
        if (it == jobs_.end()) {
            throw Error(ErrorKind::NotFound, "unknown learning job '" + job_id + "'");
        }
        job = it->second;
    }
    std::lock_guard lock(job->mutex);
    return job->snapshot;
}

void Service::wait_for_jobs() {
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(mutex_);
        workers.swap(workers_);
    }
    for (auto& w : workers) {
        if (w.joinable()) w.join();
    }
}

std::shared_ptr<Service::JobState> Service::latest_done_job(const Session& s) const {
    std::lock_guard lock(s.mutex);
    for (auto it = s.jobs.rbegin(); it != s.jobs.rend(); ++it) {
        std::lock_guard jl((*it)->mutex);
        if ((*it)->snapshot.status == JobStatus::Done) return *it;
    }
    return nullptr;
}

CompatibilityReport Service::report(const std::string& session_id, const std::string& which) const {
    Session& s = session(session_id);
    if (which != "initial" && which != "learnt") {
        throw invalid_argument("function must be \"initial\" or \"learnt\"");
    }
    const auto done = latest_done_job(s);
    if (which == "learnt" && !done) {
        throw Error(ErrorKind::Conflict, "session '" + session_id + "' has no completed learning job");
    }
    EvaluationFunction f = config_.init_function;
    CompatibilityThresholds t = config_.thresholds;
    if (done) {
        std::lock_guard lock(done->mutex);
        f = which == "learnt" ? done->snapshot.result->best : done->snapshot.init_function;
        t = done->snapshot.thresholds;
    }
    const auto prefs = preferences(session_id);
    if (prefs.empty()) {
        throw Error(ErrorKind::Conflict, "session '" + session_id + "' has no preferences yet");
    }
    return diagnose(*s.set, prefs, f, t);
}

Json Service::current_function(const std::string& session_id) const {
    Session& s = session(session_id);
    if (const auto done = latest_done_job(s)) {
        std::lock_guard lock(done->mutex);
        return {{"kind", "learnt"},
                {"function", to_json(done->snapshot.result->best)},
                {"job_id", done->snapshot.job_id}};
    }
    return {{"kind", "initial"}, {"function", to_json(config_.init_function)}};
}

void Service::install_routes(httplib::Server& server) {
    server.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const Json body = parse_body(req);
        if (!body.contains("comparison_set_path") || !body.at("comparison_set_path").is_string()) {
            throw invalid_argument("body must carry \"comparison_set_path\"");
        }
        std::optional<std::string> id;
        if (body.contains("session_id")) id = body.at("session_id").get<std::string>();
        const auto sid = create_session(body.at("comparison_set_path").get<std::string>(), id);
        reply(res, 201, {{"session_id", sid}, {"progress", progress_json(progress(sid))}});
    }));

    server.Get("/api/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
        Json out = Json::array();
        for (const auto& id : session_ids()) {
            out.push_back({{"session_id", id}, {"progress", progress_json(progress(id))}});
        }
        reply(res, 200, {{"sessions", out}});
    }));

    server.Get(R"(/api/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string sid = req.matches[1];
        reply(res, 200, {{"session_id", sid}, {"progress", progress_json(progress(sid))}});
    }));

    server.Get(R"(/api/sessions/([^/]+)/next)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string sid = req.matches[1];
        const Presentation p = next(sid);
        if (p.comparison == nullptr) {
            res.status = 204;
            res.set_header("X-Answered", std::to_string(p.progress.answered));
            res.set_header("X-Total", std::to_string(p.progress.total));
            return;
        }
        const Comparison& c = *p.comparison;
        const auto& left = p.swapped ? c.b : c.a;
        const auto& right = p.swapped ? c.a : c.b;
        reply(res, 200,
              {{"status", "pending"},
               {"comparison",
                {{"id", c.comparison_id},
                 {"object_id", c.object_id},
                 {"initial_geometry", to_json(c.initial)},
                 {"a", presented_candidate(left)},
                 {"b", presented_candidate(right)}}},
               {"swapped", p.swapped},
               {"progress", progress_json(p.progress)}});
    }));

    server.Post(R"(/api/sessions/([^/]+)/preferences)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string sid = req.matches[1];
        session(sid);
        const Json body = parse_body(req);
        if (!body.contains("comparison_id") || !body.at("comparison_id").is_string()) {
            throw invalid_argument("body must carry a string \"comparison_id\"");
        }
        if (!body.contains("label") || !body.at("label").is_string()) {
            throw invalid_argument("body must carry a \"label\", one of " + valid_label_symbols());
        }
        std::optional<std::int64_t> elapsed;
        if (body.contains("elapsed_ms") && body.at("elapsed_ms").is_number_integer()) {
            elapsed = body.at("elapsed_ms").get<std::int64_t>();
        }
        const Progress p = submit(sid, body.at("comparison_id").get<std::string>(),
                                  body.at("label").get<std::string>(), elapsed);
        reply(res, 200, progress_json(p));
    }));

    server.Post(R"(/api/sessions/([^/]+)/learn)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string sid = req.matches[1];
        session(sid);
        const std::string job_id = start_learn(sid, parse_body(req));
        const auto snap = job(job_id);
        reply(res, 202, {{"job_id", job_id}, {"status", std::string(to_string(snap.status))}});
    }));

    server.Get(R"(/api/learn/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, to_json(job(req.matches[1])));
    }));

    server.Get(R"(/api/sessions/([^/]+)/report)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const std::string which = req.has_param("function") ? req.get_param_value("function") : "initial";
        reply(res, 200, to_json(report(req.matches[1], which)));
    }));

    server.Get(R"(/api/sessions/([^/]+)/function)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        reply(res, 200, current_function(req.matches[1]));
    }));

    if (config_.ui_dir && fs::is_directory(*config_.ui_dir)) {
        server.set_mount_point("/", config_.ui_dir->string());
    }
}

}  // namespace prefeval
