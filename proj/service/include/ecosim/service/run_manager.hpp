#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecosim/cost_model.hpp"
#include "ecosim/run_config.hpp"

namespace ecosim::service {

enum class RunState { Queued, Running, Completed, Failed };

std::string_view to_string(RunState state);
std::optional<RunState> parse_run_state(std::string_view text);

struct RunDescriptor {
    std::string run_id;
    std::string city;
    RunState state = RunState::Queued;
    double progress = 0.0;
    std::string reason;  // set when Failed
    std::string created_at;
    nlohmann::json config;  // full effective RunConfig
    std::map<std::string, std::string> results;  // artifact name -> relative URL

    nlohmann::json to_json() const;
    static RunDescriptor from_json(const nlohmann::json& j);
};

// Layout under the data directory:
//   cities/<name>/stock.csv, emissions.csv, [intensity.csv], [registry.json]
//   runs/<run_id>/descriptor.json, config.json, outcomes.csv, summary.json, model.json
//   defaults.json
class RunManager {
public:
    // workers = number of runs executed concurrently (0 = hardware).
    RunManager(std::filesystem::path data_dir, unsigned workers = 0);
    ~RunManager();

    RunManager(const RunManager&) = delete;
    RunManager& operator=(const RunManager&) = delete;

    std::vector<std::string> cities() const;

    // Body: {"city": name, "config": {...}}. Throws ConfigError with field
    // level messages; the run is queued only when the body is valid.
    RunDescriptor submit(const nlohmann::json& body);

    std::optional<RunDescriptor> get(const std::string& run_id) const;
    std::vector<RunDescriptor> list() const;

    enum class RemoveResult { Removed, NotFound, Running };
    RemoveResult remove(const std::string& run_id);

    // Artifact path of a run, or nullopt for an unknown run.
    std::optional<std::filesystem::path> artifact(const std::string& run_id,
                                                  const std::string& name) const;

    CostTable default_costs() const;
    DacPricing default_dac() const;
    // Merge overrides and persist. Throw ConfigError.
    CostTable update_costs(const nlohmann::json& overrides);
    DacPricing update_dac(const nlohmann::json& body);

    // Blocks until the run is Completed or Failed, or the timeout expires.
    bool wait(const std::string& run_id, std::chrono::milliseconds timeout) const;

    // Cancels running work, marks unfinished runs Failed("interrupted") and
    // joins the workers. Called by the destructor.
    void shutdown();

    const std::filesystem::path& data_dir() const { return data_dir_; }

private:
    struct Entry {
        RunDescriptor descriptor;
        RunConfig config;
    };

    std::filesystem::path data_dir_;
    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::condition_variable work_;
    std::map<std::string, Entry> runs_;
    std::deque<std::string> queue_;
    CostTable costs_ = CostTable::defaults();
    DacPricing dac_;
    std::atomic<bool> stopping_{false};
    bool shut_down_ = false;
    std::vector<std::thread> workers_;

    std::filesystem::path run_dir(const std::string& run_id) const;
    std::filesystem::path city_dir(const std::string& city) const;
    void recover();
    void persist_defaults() const;
    void persist(const RunDescriptor& d) const;
    void worker_loop();
    void execute(const std::string& run_id);
    void transition(const std::string& run_id, RunState state, std::string reason = {});
};

std::string utc_timestamp();

}  // namespace ecosim::service
