#include "ecosim/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"
#include "ecosim/outcomes_csv.hpp"

namespace ecosim {

namespace {

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + " '" + path.string() + "'");
    return in;
}

}  // namespace

RunInputs load_inputs(const InputPaths& paths, const RunConfig& config) {
    RunInputs inputs;
    LoadOptions options;
    options.schema = config.stock_schema;
    options.policy = config.row_policy;
    options.reference_year = config.effective_reference_year();
    if (paths.registry) {
        auto in = open_input(*paths.registry, "code registry");
        options.registry.extend(CodeRegistry::load(in));
    }
    {
        auto in = open_input(paths.stock, "stock");
        LoadResult loaded = load_stock(in, options);
        inputs.stock = std::move(loaded.buildings);
        inputs.diagnostics = std::move(loaded.diagnostics);
    }
    {
        auto in = open_input(paths.emission_table, "emission table");
        inputs.emissions = load_emission_table(in);
    }
    if (paths.intensity_table) {
        auto in = open_input(*paths.intensity_table, "intensity table");
        inputs.intensities = OperationalIntensityTable::load(in);
    }
    return inputs;
}

RunResult execute_run(const RunInputs& inputs, const RunConfig& config,
                      std::function<void(const Progress&)> progress,
                      const std::atomic<bool>* cancel) {
    config.validate();
    std::vector<Building> sampled;
    std::span<const Building> stock = inputs.stock;
    if (config.sample_size) {
        sampled = sample_stock(inputs.stock, *config.sample_size, config.seed);
        stock = sampled;
    }

    SimulationModels models{EmissionModel(inputs.emissions, config.fallback), inputs.intensities,
                            config.costs, config.selector, config.renovation_base_fraction};
    Simulator simulator(stock, std::move(models), config.horizon_years,
                        config.effective_reference_year());

    RunOptions options;
    options.seed = config.seed;
    options.iterations = config.iterations;
    options.workers = config.workers;
    options.progress = std::move(progress);
    options.cancel = cancel;

    RunResult result;
    result.config = config;
    result.stock_size = stock.size();
    result.outcomes = run_iterations(simulator, config.parameters, config.mitigation, options);
    result.summary = summarize(result.outcomes, config.dac);
    result.surrogate = fit_surrogate(result.outcomes, config.interactions);
    return result;
}

std::string outcomes_text(const RunResult& result) {
    std::ostringstream out;
    write_outcomes(out, result.outcomes);
    return out.str();
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string summary_text(const SimulationSummary& summary) { return json_text(to_json(summary)); }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    auto in = open_input(path, "file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_artifacts(const std::filesystem::path& dir, const RunResult& result) {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / kOutcomesFile, outcomes_text(result));
    write_file_atomic(dir / kSummaryFile, summary_text(result.summary));
    write_file_atomic(dir / kModelFile, json_text(result.surrogate.to_json()));
    write_file_atomic(dir / kConfigFile, json_text(result.config.to_json()));
}

SimulationSummary resummarize(const std::filesystem::path& outcomes_csv,
                              const DacPricing& pricing) {
    auto in = open_input(outcomes_csv, "outcomes");
    const auto outcomes = read_outcomes(in);
    return summarize(outcomes, pricing);
}

}  // namespace ecosim
