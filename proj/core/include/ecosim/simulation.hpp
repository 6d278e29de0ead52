#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ecosim/action.hpp"
#include "ecosim/archetype_model.hpp"
#include "ecosim/building_stock.hpp"
#include "ecosim/cost_model.hpp"
#include "ecosim/random.hpp"
#include "ecosim/scenario.hpp"

namespace ecosim {

// Immutable inputs shared by every iteration of a run.
struct SimulationModels {
    EmissionModel emissions{EmissionTable{}};
    OperationalIntensityTable intensities = OperationalIntensityTable::synthetic_default();
    CostTable costs = CostTable::defaults();
    EmissionSelector selector = EmissionSelector::all();
    // Renovation emits renovation_emission_rate x (this fraction) x embodied
    // emission. 1.0 keeps renovation on the full archetype base.
    double renovation_base_fraction = 1.0;
};

struct IterationOutcome {
    std::uint64_t iteration = 0;
    ScenarioParameters params;
    PerAction<std::uint64_t> count_by_action;
    PerAction<double> emissions_by_action;  // kgCO2e, embodied
    PerAction<double> cost_by_action;       // USD
    double operational_emissions = 0.0;     // kgCO2e over the horizon
    double total_emissions = 0.0;
    double total_cost = 0.0;
    double turnover_ratio = 0.0;

    bool operator==(const IterationOutcome&) const = default;
};

// ceil(proportion x stock_size), with products within 1e-9 of an integer
// treated as that integer so 0.01 x 100 adds exactly one building.
std::size_t new_building_count(double proportion, std::size_t stock_size);

// Single-period scenario simulation over a fixed stock. Construction
// resolves every archetype once; simulate() is then const and thread safe.
class Simulator {
public:
    // Throws DataError for an empty stock, MissingArchetype under a strict
    // fallback policy, ConfigError for a negative horizon.
    Simulator(std::span<const Building> stock, SimulationModels models, double horizon_years,
              int reference_year);

    // Runs one iteration with fixed parameters. Draws two independent
    // streams from `rng`: one for per-building actions (three uniforms per
    // building, whatever its category) and one for city expansion.
    IterationOutcome simulate(const ScenarioParameters& p, RandomStream& rng) const;

    // Parameters from child(seed, index, 0), simulation from child(seed, index, 1).
    IterationOutcome run_iteration(const ParameterRanges& ranges,
                                   const MitigationConfig& mitigation, std::uint64_t seed,
                                   std::uint64_t index) const;

    // Σ embodied emission of the current stock under the selector.
    double baseline_emissions() const { return baseline_; }
    double mean_total_floor_area() const { return mean_area_; }
    std::size_t stock_size() const { return buildings_.size(); }
    const SimulationModels& models() const { return models_; }
    double horizon_years() const { return horizon_; }

private:
    struct Prepared {
        ArchetypeCode code;
        int age;
        Occupancy occupancy;
        double total_area;
        double embodied;     // selected stages, scaled to the building
        double demolition;   // stage C if selected, scaled to the building
        double operational;  // intensity x area x horizon
        double intensity;    // kgCO2e / ft² / yr
        double unit_record;  // selected stages per standardized unit
        // Per standardized unit when re-coded to wood structure; NaN when no
        // record (exact or fallback) exists.
        double wood_unit_record;
    };

    SimulationModels models_;
    std::vector<Prepared> buildings_;
    double horizon_;
    int reference_year_;
    double baseline_ = 0.0;
    double mean_area_ = 0.0;

    double wood_record(const Prepared& b) const;
};

// Convenience wrapper building a Simulator for one call.
IterationOutcome simulate_iteration(std::span<const Building> stock, const ScenarioParameters& p,
                                    const SimulationModels& models, double horizon_years,
                                    int reference_year, RandomStream& rng);

struct Progress {
    std::size_t completed = 0;
    std::size_t total = 0;
    double fraction() const { return total ? static_cast<double>(completed) / total : 1.0; }
};

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t iterations = 1;
    unsigned workers = 0;  // 0 = hardware concurrency
    // Called once per whole percent of completed iterations, in
    // non-decreasing order, serialized across workers.
    std::function<void(const Progress&)> progress;
    const std::atomic<bool>* cancel = nullptr;
};

// Executes iterations 0..n-1 across workers. Results are ordered by
// iteration index and identical for any worker count. Throws Cancelled
// when the cancel flag is raised; rethrows the first worker exception.
std::vector<IterationOutcome> run_iterations(const Simulator& simulator,
                                             const ParameterRanges& ranges,
                                             const MitigationConfig& mitigation,
                                             const RunOptions& options);

}  // namespace ecosim
