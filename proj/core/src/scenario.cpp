#include "ecosim/scenario.hpp"

#include <cmath>
#include <string>

#include "ecosim/error.hpp"

namespace ecosim {

namespace {

// Grid values first + k*step for integer hundredths, so every entry is the
// double nearest its decimal value (e.g. 105 / 100.0 == 1.05).
std::vector<double> hundredths_grid(int first, int last, int step) {
    std::vector<double> out;
    for (int v = first; v <= last; v += step) out.push_back(v / 100.0);
    return out;
}

bool in_unit_interval(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

ParameterRanges ParameterRanges::defaults() {
    ParameterRanges r;
    r.lifespan_threshold = {50, 60, 70, 80};
    r.new_age_threshold = 20;
    r.demolition_proportion = hundredths_grid(20, 50, 10);
    r.renovation_emission_rate = hundredths_grid(100, 150, 5);
    r.replacement_emission_rate = hundredths_grid(100, 300, 10);
    r.renovation_vs_replacement = hundredths_grid(10, 95, 5);
    r.new_buildings_proportion = {0.01, 0.05};
    r.new_buildings_area_factor = {0.80, 1.20};
    return r;
}

void ParameterRanges::validate() const {
    std::vector<FieldError> errors;
    const std::string p = "parameters.";
    if (new_age_threshold <= 0) errors.push_back({p + "new_age_threshold", "must be positive"});
    if (lifespan_threshold.empty()) {
        errors.push_back({p + "lifespan_threshold", "grid must not be empty"});
    }
    for (int v : lifespan_threshold) {
        if (v <= new_age_threshold) {
            errors.push_back({p + "lifespan_threshold",
                              "values must exceed new_age_threshold (" +
                                  std::to_string(new_age_threshold) + ")"});
            break;
        }
    }
    auto check_grid = [&](const std::vector<double>& grid, const char* name, bool unit) {
        if (grid.empty()) {
            errors.push_back({p + name, "grid must not be empty"});
            return;
        }
        for (double v : grid) {
            const bool ok = unit ? in_unit_interval(v) : (std::isfinite(v) && v > 0.0);
            if (!ok) {
                errors.push_back({p + name, unit ? "values must lie in [0, 1]"
                                                 : "values must be positive"});
                return;
            }
        }
    };
    check_grid(demolition_proportion, "demolition_proportion", true);
    check_grid(renovation_emission_rate, "renovation_emission_rate", false);
    check_grid(replacement_emission_rate, "replacement_emission_rate", false);
    check_grid(renovation_vs_replacement, "renovation_vs_replacement", true);

    const auto& np = new_buildings_proportion;
    if (!(in_unit_interval(np.min) && in_unit_interval(np.max) && np.min <= np.max)) {
        errors.push_back({p + "new_buildings_proportion", "require 0 <= min <= max <= 1"});
    }
    const auto& af = new_buildings_area_factor;
    if (!(std::isfinite(af.min) && std::isfinite(af.max) && af.min > 0.0 && af.min <= af.max)) {
        errors.push_back({p + "new_buildings_area_factor", "require 0 < min <= max"});
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::array<const MitigationStrategy*, 6> strategies(const MitigationConfig& m) {
    return {&m.lifespan_extension,    &m.space_optimization, &m.wood_substitution,
            &m.recycling_enhancement, &m.prefabrication,     &m.operational_efficiency};
}

std::array<MitigationStrategy*, 6> strategies(MitigationConfig& m) {
    return {&m.lifespan_extension,    &m.space_optimization, &m.wood_substitution,
            &m.recycling_enhancement, &m.prefabrication,     &m.operational_efficiency};
}

void MitigationConfig::validate() const {
    std::vector<FieldError> errors;
    const auto all = strategies(*this);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::string field = "mitigation." + std::string(kMitigationNames[i]) + ".factor";
        const double f = all[i]->factor;
        if (!std::isfinite(f)) {
            errors.push_back({field, "must be finite"});
        } else if (i == 0) {
            if (f < 0.0 || f != std::floor(f) || f > 1000.0) {
                errors.push_back({field, "must be a whole number of years >= 0"});
            }
        } else if (i == 2) {
            if (!in_unit_interval(f)) errors.push_back({field, "fraction must lie in [0, 1]"});
        } else if (!(f > 0.0 && f <= 1.0)) {
            errors.push_back({field, "multiplier must lie in (0, 1]"});
        }
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

int MitigationConfig::lifespan_bonus() const {
    return lifespan_extension.enabled ? static_cast<int>(lifespan_extension.factor) : 0;
}

ParameterRanges singleton_ranges(const ScenarioParameters& p) {
    ParameterRanges r;
    r.lifespan_threshold = {p.lifespan_threshold};
    r.new_age_threshold = p.new_age_threshold;
    r.demolition_proportion = {p.demolition_proportion};
    r.renovation_emission_rate = {p.renovation_emission_rate};
    r.replacement_emission_rate = {p.replacement_emission_rate};
    r.renovation_vs_replacement = {p.renovation_vs_replacement};
    r.new_buildings_proportion = {p.new_buildings_proportion, p.new_buildings_proportion};
    r.new_buildings_area_factor = {p.new_buildings_area_factor, p.new_buildings_area_factor};
    return r;
}

std::array<double, kFeatureNames.size()> feature_values(const ScenarioParameters& p) {
    const MitigationConfig& m = p.mitigation;
    return {static_cast<double>(p.lifespan_threshold),
            p.demolition_proportion,
            p.renovation_emission_rate,
            p.replacement_emission_rate,
            p.renovation_vs_replacement,
            p.new_buildings_proportion,
            p.new_buildings_area_factor,
            static_cast<double>(m.lifespan_bonus()),
            m.area_multiplier(),
            m.wood_fraction(),
            m.recycling_multiplier(),
            m.prefabrication_multiplier(),
            m.operational_multiplier()};
}

ScenarioParameters sample_parameters(const ParameterRanges& ranges,
                                     const MitigationConfig& mitigation, RandomStream& rng) {
    auto pick = [&rng](const auto& grid) { return grid[rng.index(grid.size())]; };
    ScenarioParameters p;
    p.lifespan_threshold = pick(ranges.lifespan_threshold);
    p.new_age_threshold = ranges.new_age_threshold;
    p.demolition_proportion = pick(ranges.demolition_proportion);
    p.renovation_emission_rate = pick(ranges.renovation_emission_rate);
    p.replacement_emission_rate = pick(ranges.replacement_emission_rate);
    p.renovation_vs_replacement = pick(ranges.renovation_vs_replacement);
    p.new_buildings_proportion =
        rng.uniform(ranges.new_buildings_proportion.min, ranges.new_buildings_proportion.max);
    p.new_buildings_area_factor =
        rng.uniform(ranges.new_buildings_area_factor.min, ranges.new_buildings_area_factor.max);
    p.mitigation = mitigation;
    return p;
}

Action assign_action(AgeCategory category, double demolition_proportion,
                     double renovation_vs_replacement, double u_demolish, double u_renovate) {
    if (category != AgeCategory::Old) return Action::Keep;
    if (u_demolish < demolition_proportion) return Action::Demolish;
    if (u_renovate < renovation_vs_replacement) return Action::Renovate;
    return Action::Replace;
}

Action assign_action(AgeCategory category, const ScenarioParameters& p, RandomStream& rng) {
    const double u_demolish = rng.uniform01();
    const double u_renovate = rng.uniform01();
    return assign_action(category, p.demolition_proportion, p.renovation_vs_replacement,
                         u_demolish, u_renovate);
}

}  // namespace ecosim
