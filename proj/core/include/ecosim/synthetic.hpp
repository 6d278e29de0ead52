#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ecosim/archetype_model.hpp"
#include "ecosim/building_stock.hpp"

namespace ecosim {

// Synthetic city stock for fixtures, benchmarks and demos. Attributes are
// drawn from the default code registry; the values carry no empirical
// meaning.
std::vector<Building> synthetic_stock(std::size_t n, std::uint64_t seed, int reference_year);

// Synthetic per-unit stage emissions for every archetype of the default
// registry (4 x 3 x 9 x 9 = 972 codes). Placeholder values, not measured
// data.
EmissionTable synthetic_emission_table(std::uint64_t seed);

void write_emission_table(std::ostream& out, const EmissionTable& table);
void write_intensity_table(std::ostream& out, const OperationalIntensityTable& table);

}  // namespace ecosim
