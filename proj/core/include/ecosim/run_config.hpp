#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "ecosim/archetype_model.hpp"
#include "ecosim/building_stock.hpp"
#include "ecosim/cost_model.hpp"
#include "ecosim/scenario.hpp"

namespace ecosim {

// Everything a run needs besides its data files. JSON layout:
//
//   {
//     "parameters": {"lifespan_threshold": [50, 60, 70, 80], "new_age_threshold": 20,
//                    "demolition_proportion": [...], "renovation_emission_rate": [...],
//                    "replacement_emission_rate": [...], "renovation_vs_replacement": [...],
//                    "new_buildings_proportion": {"min": 0.01, "max": 0.05},
//                    "new_buildings_area_factor": {"min": 0.8, "max": 1.2}},
//     "mitigation": {"<strategy>": {"enabled": false, "factor": 0.8}, ...},
//     "costs": {"commercial_renovation": 450, ...},
//     "dac_price": 500, "horizon_years": 30, "iterations": 1000, "seed": 0,
//     "selector": ["A", "B", "C"], "sample_size": null, "fallback": "nearest_by_structure",
//     "reference_year": null, "renovation_base_fraction": 1.0, "interactions": false,
//     "workers": 0, "row_policy": "abort", "stock_schema": {...}
//   }
//
// Every key is optional; missing keys keep the base configuration's value.
struct RunConfig {
    ParameterRanges parameters = ParameterRanges::defaults();
    MitigationConfig mitigation;
    CostTable costs = CostTable::defaults();
    DacPricing dac;
    double horizon_years = 30.0;
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
    EmissionSelector selector = EmissionSelector::all();
    std::optional<std::size_t> sample_size;
    FallbackPolicy fallback = FallbackPolicy::NearestByStructure;
    std::optional<int> reference_year;  // defaults to the current year
    double renovation_base_fraction = 1.0;
    bool interactions = false;  // pairwise products in the regression design
    unsigned workers = 0;       // 0 = hardware concurrency
    RowPolicy row_policy = RowPolicy::Abort;
    StockSchema stock_schema;

    // Overlays `j` on `base`. Collects every problem into one ConfigError.
    static RunConfig from_json(const nlohmann::json& j, const RunConfig& base);
    static RunConfig from_json(const nlohmann::json& j) { return from_json(j, RunConfig{}); }
    static RunConfig load(std::istream& in);

    nlohmann::json to_json() const;

    // Cross-field validation; throws ConfigError.
    void validate() const;

    int effective_reference_year() const { return reference_year.value_or(current_year()); }

    bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const ParameterRanges& ranges);
nlohmann::json to_json(const MitigationConfig& mitigation);

}  // namespace ecosim
