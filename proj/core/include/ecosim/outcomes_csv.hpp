#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ecosim/simulation.hpp"

namespace ecosim {

// Stable column order of the outcome CSV:
//   iteration,
//   the sampled parameters (lifespan_threshold .. new_buildings_area_factor,
//   new_age_threshold),
//   <strategy>_enabled, <strategy>_factor for each mitigation strategy,
//   count_<action>, emissions_<action>, cost_<action> for each action,
//   operational_emissions, total_emissions, total_cost, turnover_ratio.
// Doubles are written in shortest round-trip form, so reading a file back
// reproduces every value exactly.
const std::vector<std::string>& outcome_columns();

void write_outcomes(std::ostream& out, std::span<const IterationOutcome> outcomes);

// Throws MissingColumn or MalformedRow.
std::vector<IterationOutcome> read_outcomes(std::istream& in);

}  // namespace ecosim
