#include "ecosim/service/run_manager.hpp"

#include <algorithm>
#include <ctime>
#include <random>

#include "ecosim/error.hpp"
#include "ecosim/pipeline.hpp"

namespace ecosim::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDescriptorFile = "descriptor.json";
constexpr const char* kDefaultsFile = "defaults.json";

bool valid_name(const std::string& name) {
    if (name.empty() || name.size() > 128 || name.front() == '.') return false;
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

std::string new_run_id() {
    static std::mutex m;
    static std::mt19937_64 engine{std::random_device{}() ^
                                  static_cast<std::uint64_t>(std::time(nullptr))};
    std::lock_guard lock(m);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(engine()));
    return buf;
}

}  // namespace

std::string_view to_string(RunState state) {
    switch (state) {
        case RunState::Queued: return "queued";
        case RunState::Running: return "running";
        case RunState::Completed: return "completed";
        case RunState::Failed: return "failed";
    }
    return "failed";
}

std::optional<RunState> parse_run_state(std::string_view text) {
    for (auto s : {RunState::Queued, RunState::Running, RunState::Completed, RunState::Failed}) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json RunDescriptor::to_json() const {
    json j{{"run_id", run_id},
           {"city", city},
           {"state", std::string(service::to_string(state))},
           {"progress", progress},
           {"created_at", created_at},
           {"config", config},
           {"results", results}};
    if (state == RunState::Failed) j["reason"] = reason;
    return j;
}

RunDescriptor RunDescriptor::from_json(const json& j) {
    RunDescriptor d;
    d.run_id = j.at("run_id").get<std::string>();
    d.city = j.value("city", "");
    auto state = parse_run_state(j.at("state").get<std::string>());
    if (!state) throw DataError("unknown run state in descriptor " + d.run_id);
    d.state = *state;
    d.progress = j.value("progress", 0.0);
    d.reason = j.value("reason", "");
    d.created_at = j.value("created_at", "");
    d.config = j.value("config", json::object());
    d.results = j.value("results", std::map<std::string, std::string>{});
    return d;
}

RunManager::RunManager(fs::path data_dir, unsigned workers) : data_dir_(std::move(data_dir)) {
    fs::create_directories(data_dir_ / "runs");
    fs::create_directories(data_dir_ / "cities");
    recover();
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    for (unsigned i = 0; i < workers; ++i) workers_.emplace_back([this] { worker_loop(); });
}

RunManager::~RunManager() { shutdown(); }

void RunManager::shutdown() {
    {
        std::lock_guard lock(mutex_);
        if (shut_down_) return;
        shut_down_ = true;
        stopping_ = true;
    }
    work_.notify_all();
    for (auto& t : workers_) t.join();
    workers_.clear();
    std::lock_guard lock(mutex_);
    for (auto& [id, entry] : runs_) {
        auto& d = entry.descriptor;
        if (d.state == RunState::Queued || d.state == RunState::Running) {
            d.state = RunState::Failed;
            d.reason = "interrupted";
            persist(d);
        }
    }
    queue_.clear();
    changed_.notify_all();
}

fs::path RunManager::run_dir(const std::string& run_id) const { return data_dir_ / "runs" / run_id; }

fs::path RunManager::city_dir(const std::string& city) const { return data_dir_ / "cities" / city; }

void RunManager::recover() {
    if (fs::exists(data_dir_ / kDefaultsFile)) {
        const json j = json::parse(read_file(data_dir_ / kDefaultsFile));
        if (j.contains("costs")) costs_.merge_json(j["costs"]);
        if (j.contains("dac")) dac_ = DacPricing::checked(j["dac"].at("usd_per_tonne").get<double>());
    }
    for (const auto& entry : fs::directory_iterator(data_dir_ / "runs")) {
        const fs::path file = entry.path() / kDescriptorFile;
        if (!entry.is_directory() || !fs::exists(file)) continue;
        RunDescriptor d;
        try {
            d = RunDescriptor::from_json(json::parse(read_file(file)));
        } catch (const std::exception&) {
            continue;  // unreadable descriptor; leave the directory alone
        }
        if (d.state == RunState::Queued || d.state == RunState::Running) {
            d.state = RunState::Failed;
            d.reason = "interrupted";
            persist(d);
        }
        const std::string id = d.run_id;
        runs_[id] = Entry{std::move(d), RunConfig{}};
    }
}

void RunManager::persist_defaults() const {
    const json j{{"costs", costs_.to_json()}, {"dac", {{"usd_per_tonne", dac_.usd_per_tonne}}}};
    write_file_atomic(data_dir_ / kDefaultsFile, json_text(j));
}

void RunManager::persist(const RunDescriptor& d) const {
    write_file_atomic(run_dir(d.run_id) / kDescriptorFile, json_text(d.to_json()));
}

std::vector<std::string> RunManager::cities() const {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(data_dir_ / "cities")) {
        if (entry.is_directory() && fs::exists(entry.path() / "stock.csv") &&
            fs::exists(entry.path() / "emissions.csv")) {
            out.push_back(entry.path().filename().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

RunDescriptor RunManager::submit(const json& body) {
    if (!body.is_object()) throw ConfigError("body", "expected a JSON object");
    std::vector<FieldError> errors;
    std::string city;
    if (!body.contains("city") || !body["city"].is_string()) {
        errors.push_back({"city", "expected the name of an available city"});
    } else {
        city = body["city"].get<std::string>();
        const auto available = cities();
        if (!valid_name(city) ||
            std::find(available.begin(), available.end(), city) == available.end()) {
            errors.push_back({"city", "unknown city '" + city + "'"});
        }
    }
    for (const auto& [key, value] : body.items()) {
        if (key != "city" && key != "config") errors.push_back({key, "unknown key"});
    }

    RunConfig base;
    {
        std::lock_guard lock(mutex_);
        base.costs = costs_;
        base.dac = dac_;
    }
    RunConfig config = base;
    try {
        config = RunConfig::from_json(body.value("config", json::object()), base);
    } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    // Pin the reference year so the snapshot reproduces the run.
    config.reference_year = config.effective_reference_year();

    RunDescriptor d;
    d.city = city;
    d.created_at = utc_timestamp();
    d.config = config.to_json();
    {
        std::lock_guard lock(mutex_);
        if (shut_down_) throw Error("service is shutting down");
        do {
            d.run_id = new_run_id();
        } while (runs_.contains(d.run_id) || fs::exists(run_dir(d.run_id)));
        fs::create_directories(run_dir(d.run_id));
        write_file_atomic(run_dir(d.run_id) / kConfigFile, json_text(d.config));
        persist(d);
        runs_[d.run_id] = Entry{d, config};
        queue_.push_back(d.run_id);
    }
    work_.notify_one();
    return d;
}

std::optional<RunDescriptor> RunManager::get(const std::string& run_id) const {
    std::lock_guard lock(mutex_);
    auto it = runs_.find(run_id);
    if (it == runs_.end()) return std::nullopt;
    return it->second.descriptor;
}

std::vector<RunDescriptor> RunManager::list() const {
    std::lock_guard lock(mutex_);
    std::vector<RunDescriptor> out;
    for (const auto& [id, entry] : runs_) out.push_back(entry.descriptor);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.created_at, a.run_id) < std::tie(b.created_at, b.run_id);
    });
    return out;
}

RunManager::RemoveResult RunManager::remove(const std::string& run_id) {
    std::lock_guard lock(mutex_);
    auto it = runs_.find(run_id);
    if (it == runs_.end()) return RemoveResult::NotFound;
    if (it->second.descriptor.state == RunState::Running) return RemoveResult::Running;
    queue_.erase(std::remove(queue_.begin(), queue_.end(), run_id), queue_.end());
    runs_.erase(it);
    std::error_code ec;
    fs::remove_all(run_dir(run_id), ec);
    changed_.notify_all();
    return RemoveResult::Removed;
}

std::optional<fs::path> RunManager::artifact(const std::string& run_id,
                                             const std::string& name) const {
    std::lock_guard lock(mutex_);
    if (!runs_.contains(run_id)) return std::nullopt;
    return run_dir(run_id) / name;
}

CostTable RunManager::default_costs() const {
    std::lock_guard lock(mutex_);
    return costs_;
}

DacPricing RunManager::default_dac() const {
    std::lock_guard lock(mutex_);
    return dac_;
}

CostTable RunManager::update_costs(const json& overrides) {
    std::lock_guard lock(mutex_);
    CostTable merged = costs_;
    merged.merge_json(overrides, "costs");
    costs_ = merged;
    persist_defaults();
    return costs_;
}

DacPricing RunManager::update_dac(const json& body) {
    double price = 0.0;
    if (body.is_number()) {
        price = body.get<double>();
    } else if (body.is_object() && body.size() == 1 && body.contains("usd_per_tonne") &&
               body["usd_per_tonne"].is_number()) {
        price = body["usd_per_tonne"].get<double>();
    } else {
        throw ConfigError("usd_per_tonne", "expected {\"usd_per_tonne\": number}");
    }
    DacPricing pricing;
    try {
        pricing = DacPricing::checked(price);
    } catch (const ConfigError& e) {
        throw ConfigError("usd_per_tonne", e.errors().empty() ? e.what() : e.errors()[0].message);
    }
    std::lock_guard lock(mutex_);
    dac_ = pricing;
    persist_defaults();
    return dac_;
}

bool RunManager::wait(const std::string& run_id, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(mutex_);
    return changed_.wait_for(lock, timeout, [&] {
        auto it = runs_.find(run_id);
        if (it == runs_.end()) return true;
        const auto s = it->second.descriptor.state;
        return s == RunState::Completed || s == RunState::Failed;
    });
}

void RunManager::transition(const std::string& run_id, RunState state, std::string reason) {
    std::lock_guard lock(mutex_);
    auto it = runs_.find(run_id);
    if (it == runs_.end()) return;
    auto& d = it->second.descriptor;
    d.state = state;
    d.reason = std::move(reason);
    if (state == RunState::Completed) {
        d.progress = 1.0;
        const std::string base = "/api/runs/" + run_id;
        d.results = {{"summary", base + "/summary"},
                     {"outcomes", base + "/outcomes.csv"},
                     {"model", base + "/model"}};
    }
    persist(d);
    changed_.notify_all();
}

void RunManager::worker_loop() {
    for (;;) {
        std::string run_id;
        {
            std::unique_lock lock(mutex_);
            work_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_) return;
            run_id = queue_.front();
            queue_.pop_front();
            auto it = runs_.find(run_id);
            if (it == runs_.end()) continue;
            it->second.descriptor.state = RunState::Running;
            persist(it->second.descriptor);
            changed_.notify_all();
        }
        execute(run_id);
    }
}

void RunManager::execute(const std::string& run_id) {
    RunConfig config;
    std::string city;
    {
        std::lock_guard lock(mutex_);
        const auto& entry = runs_.at(run_id);
        config = entry.config;
        city = entry.descriptor.city;
    }
    try {
        const fs::path dir = city_dir(city);
        InputPaths paths{dir / "stock.csv", dir / "emissions.csv", std::nullopt, std::nullopt};
        if (fs::exists(dir / "intensity.csv")) paths.intensity_table = dir / "intensity.csv";
        if (fs::exists(dir / "registry.json")) paths.registry = dir / "registry.json";
        const RunInputs inputs = load_inputs(paths, config);
        auto progress = [&](const Progress& p) {
            std::lock_guard lock(mutex_);
            auto it = runs_.find(run_id);
            if (it == runs_.end()) return;
            auto& d = it->second.descriptor;
            d.progress = std::max(d.progress, std::min(p.fraction(), 1.0));
            changed_.notify_all();
        };
        const RunResult result = execute_run(inputs, config, progress, &stopping_);
        write_artifacts(run_dir(run_id), result);
        transition(run_id, RunState::Completed);
    } catch (const Cancelled&) {
        transition(run_id, RunState::Failed, "interrupted");
    } catch (const std::exception& e) {
        transition(run_id, RunState::Failed, e.what());
    }
}

}  // namespace ecosim::service
