#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ecosim/building_stock.hpp"

namespace ecosim {

// Floor area of the standardized archetype unit (single story).
inline constexpr double kStandardUnitArea = 1000.0;

// Aggregated life-cycle stages: A product and construction, B use
// (maintenance and replacement materials), C end of life.
enum class Stage : std::uint8_t { A = 0, B = 1, C = 2 };

inline constexpr std::array<Stage, 3> kStages{Stage::A, Stage::B, Stage::C};

char stage_letter(Stage stage);

// Nonempty subset of {A, B, C}.
class EmissionSelector {
public:
    static EmissionSelector all() { return EmissionSelector(0b111); }
    static EmissionSelector only(Stage stage);
    // Throws ConfigError for an empty list or unknown stage letters.
    static EmissionSelector from_letters(const std::vector<std::string>& letters);

    bool contains(Stage stage) const { return (mask_ >> static_cast<int>(stage)) & 1U; }
    std::vector<std::string> letters() const;

    bool operator==(const EmissionSelector&) const = default;

private:
    explicit EmissionSelector(std::uint8_t mask) : mask_(mask) {}
    std::uint8_t mask_;
};

struct ArchetypeEmissionRecord {
    ArchetypeCode code;
    // kgCO2e per standardized unit; absent stages contribute nothing.
    std::array<std::optional<double>, 3> stage_emissions{};

    double stage(Stage s) const { return stage_emissions[static_cast<int>(s)].value_or(0.0); }
    double total() const;
    double selected(EmissionSelector selector) const;
};

using EmissionTable = std::unordered_map<ArchetypeCode, ArchetypeEmissionRecord>;

// Columns code, stage_A, stage_B, stage_C. Empty stage cells are absent
// stages. Throws DuplicateArchetype, NegativeEmission or MalformedRow.
EmissionTable load_emission_table(std::istream& in);

enum class FallbackPolicy { Strict, NearestByStructure, GlobalMean };

std::string_view to_string(FallbackPolicy policy);
std::optional<FallbackPolicy> parse_fallback_policy(std::string_view text);

// Emission table plus the precomputed fallback records. Immutable once
// built; safe to share across threads.
class EmissionModel {
public:
    explicit EmissionModel(EmissionTable table,
                           FallbackPolicy policy = FallbackPolicy::NearestByStructure);

    // Record for `code`, or the fallback substitute. Throws MissingArchetype
    // under Strict policy, or when the table is empty.
    const ArchetypeEmissionRecord& record_for(const ArchetypeCode& code) const;
    bool has_exact(const ArchetypeCode& code) const { return table_.contains(code); }

    const EmissionTable& table() const { return table_; }
    FallbackPolicy policy() const { return policy_; }

private:
    EmissionTable table_;
    FallbackPolicy policy_;
    std::map<char, ArchetypeEmissionRecord> structure_means_;
    std::optional<ArchetypeEmissionRecord> global_mean_;
};

// Archetype code taken directly from a building's attribute fields.
ArchetypeCode archetype_of(const Building& b);

// Selected stages of `record`, scaled linearly by total floor area against
// the 1,000 ft² single-story unit.
double scale_to_area(const ArchetypeEmissionRecord& record, EmissionSelector selector,
                     double total_floor_area);

double embodied_emission(const Building& b, const EmissionModel& model,
                         EmissionSelector selector);
double embodied_emission(const Building& b, const EmissionTable& table,
                         EmissionSelector selector, FallbackPolicy fallback);

inline constexpr std::string_view kDefaultActivity = "__default__";

// Operational carbon intensity (kgCO2e per ft² per year) by activity type.
class OperationalIntensityTable {
public:
    explicit OperationalIntensityTable(double default_intensity);

    // Columns activity, kgco2e_per_sqft_year; one row must be "__default__".
    static OperationalIntensityTable load(std::istream& in);
    // Synthetic placeholder intensities, not measured values. Replace with a
    // real table for any actual study.
    static OperationalIntensityTable synthetic_default();

    void set(std::string activity, double intensity);
    double intensity(std::string_view activity) const;
    double default_intensity() const { return default_; }
    const std::map<std::string, double, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, double, std::less<>> entries_;
    double default_;
};

double operational_emission(const Building& b, const OperationalIntensityTable& table,
                            double horizon_years);

}  // namespace ecosim
