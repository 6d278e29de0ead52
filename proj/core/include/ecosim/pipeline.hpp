#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ecosim/archetype_model.hpp"
#include "ecosim/building_stock.hpp"
#include "ecosim/prediction.hpp"
#include "ecosim/run_config.hpp"
#include "ecosim/simulation.hpp"
#include "ecosim/summary.hpp"

namespace ecosim {

struct InputPaths {
    std::filesystem::path stock;
    std::filesystem::path emission_table;
    std::optional<std::filesystem::path> intensity_table;
    std::optional<std::filesystem::path> registry;
};

struct RunInputs {
    std::vector<Building> stock;
    std::vector<StockDiagnostic> diagnostics;  // rows skipped under RowPolicy::Skip
    EmissionTable emissions;
    OperationalIntensityTable intensities = OperationalIntensityTable::synthetic_default();
};

// Reads every input file. A file that cannot be opened is a DataError.
RunInputs load_inputs(const InputPaths& paths, const RunConfig& config);

struct RunResult {
    RunConfig config;
    std::size_t stock_size = 0;  // after sampling
    std::vector<IterationOutcome> outcomes;
    SimulationSummary summary;
    SurrogateFit surrogate;
};

// Samples the stock when config.sample_size is set, runs every iteration,
// summarizes and fits the surrogate.
RunResult execute_run(const RunInputs& inputs, const RunConfig& config,
                      std::function<void(const Progress&)> progress = {},
                      const std::atomic<bool>* cancel = nullptr);

// Artifact file names inside an output directory.
inline constexpr const char* kOutcomesFile = "outcomes.csv";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kModelFile = "model.json";
inline constexpr const char* kConfigFile = "config.json";

// Serialized artifact text, exactly as written to disk.
std::string outcomes_text(const RunResult& result);
std::string summary_text(const SimulationSummary& summary);
std::string json_text(const nlohmann::json& j);

// Writes outcomes.csv, summary.json, model.json and config.json. Each file
// is written to a temporary name first and renamed into place.
void write_artifacts(const std::filesystem::path& dir, const RunResult& result);

void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Summary recomputed from an outcomes CSV.
SimulationSummary resummarize(const std::filesystem::path& outcomes_csv, const DacPricing& pricing);

}  // namespace ecosim
