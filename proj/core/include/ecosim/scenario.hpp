#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "ecosim/action.hpp"
#include "ecosim/building_stock.hpp"
#include "ecosim/random.hpp"

namespace ecosim {

struct Interval {
    double min = 0.0;
    double max = 0.0;

    bool operator==(const Interval&) const = default;
};

// Sampling space for one Monte Carlo iteration. Grid fields are drawn
// uniformly from their listed values; intervals are drawn uniformly with
// both bounds inclusive.
struct ParameterRanges {
    std::vector<int> lifespan_threshold;  // years; old buildings exceed it
    int new_age_threshold = 20;           // years; younger buildings are new
    std::vector<double> demolition_proportion;
    std::vector<double> renovation_emission_rate;
    std::vector<double> replacement_emission_rate;
    std::vector<double> renovation_vs_replacement;
    Interval new_buildings_proportion;
    Interval new_buildings_area_factor;

    // Lifespan 50..80 by 10, demolition 0.20..0.50 by 0.10, renovation rate
    // 1.00..1.50 by 0.05, replacement rate 1.00..3.00 by 0.10, renovation
    // share 0.10..0.95 by 0.05, expansion U[0.01, 0.05], new area
    // U[0.80, 1.20].
    static ParameterRanges defaults();

    // Throws ConfigError listing every invalid field.
    void validate() const;

    bool operator==(const ParameterRanges&) const = default;
};

struct MitigationStrategy {
    bool enabled = false;
    double factor = 1.0;

    bool operator==(const MitigationStrategy&) const = default;
};

// Each strategy is independent:
//   lifespan_extension      whole years added to the lifespan threshold
//   space_optimization      multiplier on the new-building area factor
//   wood_substitution       fraction of non-wood replacements and new
//                           builds re-coded to wood structure
//   recycling_enhancement   multiplier on embodied emissions of renovation,
//                           replacement and new construction
//   prefabrication          multiplier on embodied emissions of replacement
//                           and new construction
//   operational_efficiency  multiplier on operational intensities
struct MitigationConfig {
    MitigationStrategy lifespan_extension{false, 10.0};
    MitigationStrategy space_optimization{false, 0.9};
    MitigationStrategy wood_substitution{false, 0.5};
    MitigationStrategy recycling_enhancement{false, 0.8};
    MitigationStrategy prefabrication{false, 0.9};
    MitigationStrategy operational_efficiency{false, 0.8};

    void validate() const;

    int lifespan_bonus() const;
    double area_multiplier() const { return effective(space_optimization, 1.0); }
    double wood_fraction() const { return effective(wood_substitution, 0.0); }
    double recycling_multiplier() const { return effective(recycling_enhancement, 1.0); }
    double prefabrication_multiplier() const { return effective(prefabrication, 1.0); }
    double operational_multiplier() const { return effective(operational_efficiency, 1.0); }

    bool operator==(const MitigationConfig&) const = default;

private:
    static double effective(const MitigationStrategy& s, double neutral) {
        return s.enabled ? s.factor : neutral;
    }
};

inline constexpr std::array<std::string_view, 6> kMitigationNames{
    "lifespan_extension",    "space_optimization", "wood_substitution",
    "recycling_enhancement", "prefabrication",     "operational_efficiency"};

std::array<const MitigationStrategy*, 6> strategies(const MitigationConfig& m);
std::array<MitigationStrategy*, 6> strategies(MitigationConfig& m);

struct ScenarioParameters {
    int lifespan_threshold = 50;
    int new_age_threshold = 20;
    double demolition_proportion = 0.2;
    double renovation_emission_rate = 1.0;
    double replacement_emission_rate = 1.0;
    double renovation_vs_replacement = 0.5;
    double new_buildings_proportion = 0.01;
    double new_buildings_area_factor = 1.0;
    MitigationConfig mitigation;

    // Lifespan threshold after lifespan extension.
    int effective_lifespan() const { return lifespan_threshold + mitigation.lifespan_bonus(); }

    bool operator==(const ScenarioParameters&) const = default;
};

// Ranges whose grids and intervals collapse to the single point `p`.
ParameterRanges singleton_ranges(const ScenarioParameters& p);

// Numeric features of a scenario: the sampled parameters followed by the
// effective mitigation values (neutral value when a strategy is disabled).
inline constexpr std::array<std::string_view, 13> kFeatureNames{
    "lifespan_threshold",
    "demolition_proportion",
    "renovation_emission_rate",
    "replacement_emission_rate",
    "renovation_vs_replacement",
    "new_buildings_proportion",
    "new_buildings_area_factor",
    "lifespan_extension_years",
    "space_optimization_multiplier",
    "wood_substitution_fraction",
    "recycling_multiplier",
    "prefabrication_multiplier",
    "operational_multiplier",
};

std::array<double, kFeatureNames.size()> feature_values(const ScenarioParameters& p);

// One draw per field in declaration order.
ScenarioParameters sample_parameters(const ParameterRanges& ranges,
                                     const MitigationConfig& mitigation, RandomStream& rng);

// New and mid-range buildings are kept. An old building is demolished when
// u_demolish < demolition_proportion, otherwise renovated when
// u_renovate < renovation_vs_replacement, otherwise replaced.
Action assign_action(AgeCategory category, double demolition_proportion,
                     double renovation_vs_replacement, double u_demolish, double u_renovate);

// Consumes exactly two uniforms from `rng` regardless of the category.
Action assign_action(AgeCategory category, const ScenarioParameters& p, RandomStream& rng);

}  // namespace ecosim
