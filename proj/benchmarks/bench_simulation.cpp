#include <benchmark/benchmark.h>

#include <random>

#include "ecosim/prediction.hpp"
#include "ecosim/simulation.hpp"
#include "ecosim/summary.hpp"
#include "ecosim/synthetic.hpp"

using namespace ecosim;

namespace {

constexpr int kYear = 2024;

struct Fixture {
    std::vector<Building> stock;
    Simulator simulator;

    explicit Fixture(std::size_t buildings)
        : stock(synthetic_stock(buildings, 1, kYear)),
          simulator(stock, models(), 30.0, kYear) {}

    static SimulationModels models() {
        SimulationModels m;
        m.emissions = EmissionModel(synthetic_emission_table(1));
        return m;
    }
};

void BM_Simulate(benchmark::State& state) {
    const Fixture f(static_cast<std::size_t>(state.range(0)));
    ScenarioParameters p;
    p.new_buildings_proportion = 0.03;
    RandomStream rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(f.simulator.simulate(p, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(1000)->Arg(10000);

void BM_RunIterations(benchmark::State& state) {
    const Fixture f(1000);
    RunOptions options;
    options.seed = 3;
    options.iterations = static_cast<std::size_t>(state.range(0));
    options.workers = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_iterations(f.simulator, ParameterRanges::defaults(), {}, options));
    }
}
BENCHMARK(BM_RunIterations)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Summarize(benchmark::State& state) {
    const Fixture f(200);
    RunOptions options;
    options.iterations = static_cast<std::size_t>(state.range(0));
    const auto outcomes = run_iterations(f.simulator, ParameterRanges::defaults(), {}, options);
    for (auto _ : state) benchmark::DoNotOptimize(summarize(outcomes, DacPricing{}));
}
BENCHMARK(BM_Summarize)->Arg(10000);

void BM_FitOls(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    const auto cols = static_cast<std::size_t>(state.range(1));
    std::vector<std::string> names{"intercept"};
    for (std::size_t c = 1; c < cols; ++c) names.push_back("x" + std::to_string(c));
    DesignMatrix x(names);
    std::vector<double> y;
    std::mt19937_64 engine(1);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> row(cols, 1.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double target = 0.0;
        for (std::size_t c = 1; c < cols; ++c) {
            row[c] = n(engine);
            target += static_cast<double>(c) * row[c];
        }
        x.add_row(row);
        y.push_back(target + n(engine));
    }
    for (auto _ : state) benchmark::DoNotOptimize(fit_ols(x, y));
}
BENCHMARK(BM_FitOls)->Args({1000, 14})->Args({10000, 14})->Args({10000, 35});

}  // namespace

BENCHMARK_MAIN();
