// ecosim: command line front end.
//
//   ecosim run --stock s.csv --emission-table e.csv --config c.json
//              --seed 42 --iterations 1000 --out-dir out/
//   ecosim summarize --outcomes out/outcomes.csv [--dac-price 500]
//   ecosim predict --model out/model.json --set demolition_proportion=0.3
//   ecosim synth --buildings 1000 --seed 1 --out-dir fixtures/
//   ecosim serve [--data-dir d] [--port 8080]
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 runtime failure.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"
#include "ecosim/outcomes_csv.hpp"
#include "ecosim/pipeline.hpp"
#include "ecosim/prediction.hpp"
#include "ecosim/service/http_api.hpp"
#include "ecosim/service/run_manager.hpp"
#include "ecosim/synthetic.hpp"

namespace {

using namespace ecosim;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct RunArgs {
    std::string stock, emission_table, config, out_dir;
    std::string intensity_table, registry;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    std::optional<std::size_t> sample;
    std::optional<unsigned> workers;
    bool quiet = false;
};

int cmd_run(const RunArgs& a) {
    RunConfig config;
    {
        std::ifstream in(a.config);
        if (!in) throw ConfigError("--config", "cannot open '" + a.config + "'");
        config = RunConfig::load(in);
    }
    config.seed = a.seed;
    config.iterations = a.iterations;
    if (a.sample) config.sample_size = *a.sample;
    if (a.workers) config.workers = *a.workers;
    config.reference_year = config.effective_reference_year();
    config.validate();

    InputPaths paths{a.stock, a.emission_table, std::nullopt, std::nullopt};
    if (!a.intensity_table.empty()) paths.intensity_table = a.intensity_table;
    if (!a.registry.empty()) paths.registry = a.registry;
    const RunInputs inputs = load_inputs(paths, config);
    for (const auto& d : inputs.diagnostics) {
        std::cerr << "skipped stock row " << d.row << ": " << d.message << "\n";
    }

    std::function<void(const Progress&)> progress;
    if (!a.quiet) {
        progress = [](const Progress& p) {
            const auto pct = static_cast<int>(p.fraction() * 100.0 + 1e-9);
            if (pct % 10 == 0) std::cerr << "progress " << pct << "%\n";
        };
    }
    const RunResult result = execute_run(inputs, config, progress);
    write_artifacts(a.out_dir, result);
    if (!a.quiet) {
        const auto& s = result.summary;
        std::cerr << "buildings " << result.stock_size << ", iterations " << s.iterations << "\n"
                  << "optimistic  " << s.optimistic.total_emissions << " kgCO2e\n"
                  << "probable    " << s.probable.total_emissions << " kgCO2e\n"
                  << "pessimistic " << s.pessimistic.total_emissions << " kgCO2e\n";
        if (!result.surrogate.model) {
            std::cerr << "regression unavailable: " << result.surrogate.reason << "\n";
        }
    }
    return 0;
}

int cmd_summarize(const std::string& outcomes, double dac_price, const std::string& out) {
    const auto summary = resummarize(outcomes, DacPricing::checked(dac_price));
    const std::string text = summary_text(summary);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(out, text);
    }
    return 0;
}

void apply_setting(ScenarioParameters& p, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set", "expected name=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw ConfigError("--set " + key, "expected a number, got '" + text + "'");
    }
    if (key == "lifespan_threshold") {
        p.lifespan_threshold = static_cast<int>(value);
    } else if (key == "new_age_threshold") {
        p.new_age_threshold = static_cast<int>(value);
    } else if (key == "demolition_proportion") {
        p.demolition_proportion = value;
    } else if (key == "renovation_emission_rate") {
        p.renovation_emission_rate = value;
    } else if (key == "replacement_emission_rate") {
        p.replacement_emission_rate = value;
    } else if (key == "renovation_vs_replacement") {
        p.renovation_vs_replacement = value;
    } else if (key == "new_buildings_proportion") {
        p.new_buildings_proportion = value;
    } else if (key == "new_buildings_area_factor") {
        p.new_buildings_area_factor = value;
    } else {
        auto all = strategies(p.mitigation);
        for (std::size_t i = 0; i < kMitigationNames.size(); ++i) {
            if (kMitigationNames[i] == key) {
                all[i]->enabled = true;
                all[i]->factor = value;
                return;
            }
        }
        throw ConfigError("--set " + key, "unknown parameter");
    }
}

int cmd_predict(const std::string& model_path, const std::vector<std::string>& settings) {
    const json j = json::parse(read_file(model_path));
    if (j.value("status", "ok") != "ok") {
        throw DataError("model unavailable: " + j.value("reason", std::string("unknown")));
    }
    const OlsModel model = OlsModel::from_json(j);
    ScenarioParameters p;
    for (const auto& s : settings) apply_setting(p, s);
    const Prediction pred = predict(model, p);
    std::cout << json{{"total_emissions", pred.value},
                      {"lower", pred.lower()},
                      {"upper", pred.upper()}}.dump(2)
              << "\n";
    return 0;
}

int cmd_synth(std::size_t buildings, std::uint64_t seed, int year, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir = out_dir;
    std::ostringstream stock, emissions, intensity;
    write_stock(stock, synthetic_stock(buildings, seed, year));
    write_emission_table(emissions, synthetic_emission_table(seed));
    write_intensity_table(intensity, OperationalIntensityTable::synthetic_default());
    write_file_atomic(dir / "stock.csv", stock.str());
    write_file_atomic(dir / "emissions.csv", emissions.str());
    write_file_atomic(dir / "intensity.csv", intensity.str());
    return 0;
}

int cmd_serve(const std::string& data_dir, const std::string& host, int port, unsigned workers) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    service::RunManager runs(data_dir, workers);
    service::HttpApi api(runs);
    const int bound = api.bind(host, port);
    if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
    std::cerr << "serving " << data_dir << " on http://" << host << ":" << bound << "\n";

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        api.stop();
    });
    api.listen();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    runs.shutdown();
    return 0;
}

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo embodied carbon scenarios for city building stocks"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "simulate a stock and write outcomes, summary and model");
    run_cmd->add_option("--stock", run.stock, "stock CSV")->required();
    run_cmd->add_option("--emission-table", run.emission_table, "archetype emission CSV")->required();
    run_cmd->add_option("--config", run.config, "run configuration JSON")->required();
    run_cmd->add_option("--seed", run.seed, "64-bit seed")->required();
    run_cmd->add_option("--iterations", run.iterations, "Monte Carlo iterations")
        ->required()
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--out-dir", run.out_dir, "output directory")->required();
    run_cmd->add_option("--sample", run.sample, "simulate a random sample of N buildings");
    run_cmd->add_option("--intensity-table", run.intensity_table, "operational intensity CSV");
    run_cmd->add_option("--registry", run.registry, "extra archetype codes JSON");
    run_cmd->add_option("--workers", run.workers, "worker threads (0 = all cores)");
    run_cmd->add_flag("--quiet", run.quiet, "no progress output");

    std::string outcomes, summary_out;
    double dac_price = DacPricing{}.usd_per_tonne;
    auto* sum_cmd = app.add_subcommand("summarize", "summarize an outcomes CSV");
    sum_cmd->add_option("--outcomes", outcomes, "outcomes CSV")->required();
    sum_cmd->add_option("--dac-price", dac_price, "USD per tonne CO2e");
    sum_cmd->add_option("--out", summary_out, "write to a file instead of stdout");

    std::string model_path;
    std::vector<std::string> settings;
    auto* pred_cmd = app.add_subcommand("predict", "evaluate a fitted regression model");
    pred_cmd->add_option("--model", model_path, "model JSON")->required();
    pred_cmd->add_option("--set", settings, "parameter=value (mitigation name=factor enables it)");

    std::size_t buildings = 1000;
    std::uint64_t synth_seed = 1;
    int synth_year = current_year();
    std::string synth_dir;
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic stock and emission tables");
    synth_cmd->add_option("--buildings", buildings, "stock size")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth_seed, "generator seed");
    synth_cmd->add_option("--reference-year", synth_year, "latest construction year");
    synth_cmd->add_option("--out-dir", synth_dir, "output directory")->required();

    std::string data_dir = env_or("ECOSIM_DATA_DIR", "data");
    std::string host = "127.0.0.1";
    int port = std::atoi(env_or("ECOSIM_PORT", "8080").c_str());
    unsigned serve_workers = 0;
    auto* serve_cmd = app.add_subcommand("serve", "HTTP service");
    serve_cmd->add_option("--data-dir", data_dir, "data directory (ECOSIM_DATA_DIR)");
    serve_cmd->add_option("--host", host, "listen address");
    serve_cmd->add_option("--port", port, "listen port (ECOSIM_PORT)");
    serve_cmd->add_option("--workers", serve_workers, "concurrent runs (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* context = &app;
        for (auto* sub : app.get_subcommands()) context = sub;
        std::cerr << context->help();
        return kExitConfig;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*sum_cmd) return cmd_summarize(outcomes, dac_price, summary_out);
        if (*pred_cmd) return cmd_predict(model_path, settings);
        if (*synth_cmd) return cmd_synth(buildings, synth_seed, synth_year, synth_dir);
        if (*serve_cmd) return cmd_serve(data_dir, host, port, serve_workers);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        for (const auto& f : e.errors()) std::cerr << "  " << f.field << ": " << f.message << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const EncodingMismatch& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
