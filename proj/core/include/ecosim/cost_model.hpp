#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "ecosim/action.hpp"
#include "ecosim/building_stock.hpp"

namespace ecosim {

enum class CostKind { Renovation, NewConstruction, Demolition };

// The eight unit costs (USD per ft² of total floor area). Entries may be
// cleared; pricing an action that needs a cleared entry throws
// MissingCostEntry.
class CostTable {
public:
    enum class Entry {
        CommercialRenovation,
        CommercialNewConstruction,
        CommercialDemolition,
        ResidentialApartmentNewConstruction,
        ResidentialSingleFamilyNewConstruction,
        ResidentialApartmentRenovation,
        ResidentialSingleFamilyRenovation,
        ResidentialDemolition,
    };
    static constexpr std::size_t kEntryCount = 8;

    // Default unit costs: commercial renovation 450, commercial new 562,
    // commercial demolition 10, apartment new 508, single-family new 200,
    // apartment renovation 400, single-family renovation 100, residential
    // demolition 15.
    static CostTable defaults();
    static CostTable empty() { return CostTable(); }

    static std::string_view key(Entry entry);
    static std::optional<Entry> parse_key(std::string_view key);
    static Entry entry_for(Occupancy occupancy, CostKind kind);

    std::optional<double> get(Entry entry) const { return values_[index(entry)]; }
    void set(Entry entry, std::optional<double> usd_per_sqft);

    // USD/ft² for (occupancy, kind); throws MissingCostEntry when cleared.
    double unit_cost(Occupancy occupancy, CostKind kind) const;

    nlohmann::json to_json() const;
    // Overlays the keys present in `j` (a null value clears an entry).
    // Throws ConfigError naming "<prefix>.<key>" for bad keys or values.
    void merge_json(const nlohmann::json& j, const std::string& prefix = "costs");

    bool operator==(const CostTable&) const = default;

private:
    static std::size_t index(Entry e) { return static_cast<std::size_t>(e); }
    std::array<std::optional<double>, kEntryCount> values_{};
};

// Keep 0; Renovate renovation; Demolish demolition; NewConstruction new
// construction; Replace demolition + new construction. All scaled by the
// building's total floor area.
double construction_cost(Action action, const Building& b, const CostTable& table);

struct DacPricing {
    double usd_per_tonne = 500.0;  // adjustable placeholder, not a measured price

    static DacPricing checked(double usd_per_tonne);

    bool operator==(const DacPricing&) const = default;
};

double dac_cost(double emissions_kg, const DacPricing& pricing);

}  // namespace ecosim
