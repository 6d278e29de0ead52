#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ecosim/cost_model.hpp"
#include "ecosim/scenario.hpp"
#include "ecosim/simulation.hpp"

namespace ecosim {

// 1-based nearest rank: ceil(q * n) clamped to [1, n]. Products within 1e-9
// of an integer count as that integer.
std::size_t nearest_rank(double q, std::size_t n);

// Nearest-rank percentile of unsorted values. Requires a nonempty span.
double percentile(std::span<const double> values, double q);

struct Distribution {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for one value
    double p5 = 0.0;
    double median = 0.0;
    double p95 = 0.0;
};

Distribution describe(std::span<const double> values);

struct ScenarioPoint {
    std::uint64_t iteration = 0;
    double total_emissions = 0.0;
    double total_cost = 0.0;
    double turnover_ratio = 0.0;
    double dac_cost = 0.0;
};

struct ModeHistogram {
    double min = 0.0;
    double bin_width = 0.0;  // 0 when every value is equal
    std::vector<std::size_t> counts;
    std::size_t mode_bin = 0;
    double mode_midpoint = 0.0;
};

// Histogram of `values` with Freedman-Diaconis bin width 2 IQR n^(-1/3)
// (Sturges' bin count when the IQR is zero but the range is not). The mode
// bin is the highest count, lowest index on ties.
ModeHistogram mode_histogram(std::span<const double> values);

struct LifespanBreakdown {
    int lifespan_threshold = 0;
    std::size_t count = 0;
    Distribution total_emissions;
    double mean_total_cost = 0.0;
    double mean_turnover_ratio = 0.0;
    PerAction<double> mean_emissions_by_action;
};

struct DecileBreakdown {
    int decile = 0;  // 1 = lowest emissions
    std::size_t count = 0;
    double mean_total_emissions = 0.0;
    std::array<double, kFeatureNames.size()> mean_features{};
};

struct SimulationSummary {
    std::size_t iterations = 0;
    std::uint64_t buildings = 0;  // existing buildings per iteration
    double dac_price = 0.0;

    // Mode bin, 5th and 95th nearest-rank percentile of total emissions.
    ScenarioPoint probable;
    ScenarioPoint optimistic;
    ScenarioPoint pessimistic;
    ModeHistogram histogram;

    Distribution total_emissions;
    Distribution operational_emissions;
    Distribution total_cost;
    Distribution turnover_ratio;
    PerAction<double> mean_emissions_by_action;
    PerAction<double> mean_cost_by_action;
    PerAction<double> mean_count_by_action;

    std::vector<LifespanBreakdown> by_lifespan;
    std::vector<DecileBreakdown> deciles;
};

// Requires at least one outcome (throws DataError otherwise). The result
// depends only on the outcome values and their iteration order.
SimulationSummary summarize(std::span<const IterationOutcome> outcomes, const DacPricing& pricing);

nlohmann::json to_json(const SimulationSummary& summary);

}  // namespace ecosim
