#include "ecosim/cost_model.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"

namespace ecosim {

std::string_view to_string(Action action) {
    switch (action) {
        case Action::Keep: return "keep";
        case Action::Demolish: return "demolish";
        case Action::Renovate: return "renovate";
        case Action::Replace: return "replace";
        case Action::NewConstruction: return "new_construction";
    }
    return "?";
}

std::optional<Action> parse_action(std::string_view text) {
    for (Action a : kActions) {
        if (to_string(a) == text) return a;
    }
    return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, CostTable::kEntryCount> kKeys{
    "commercial_renovation",
    "commercial_new_construction",
    "commercial_demolition",
    "residential_apartment_new_construction",
    "residential_single_family_new_construction",
    "residential_apartment_renovation",
    "residential_single_family_renovation",
    "residential_demolition",
};

}  // namespace

CostTable CostTable::defaults() {
    CostTable t;
    t.set(Entry::CommercialRenovation, 450.0);
    t.set(Entry::CommercialNewConstruction, 562.0);
    t.set(Entry::CommercialDemolition, 10.0);
    t.set(Entry::ResidentialApartmentNewConstruction, 508.0);
    t.set(Entry::ResidentialSingleFamilyNewConstruction, 200.0);
    t.set(Entry::ResidentialApartmentRenovation, 400.0);
    t.set(Entry::ResidentialSingleFamilyRenovation, 100.0);
    t.set(Entry::ResidentialDemolition, 15.0);
    return t;
}

std::string_view CostTable::key(Entry entry) { return kKeys[index(entry)]; }

std::optional<CostTable::Entry> CostTable::parse_key(std::string_view key) {
    for (std::size_t i = 0; i < kKeys.size(); ++i) {
        if (kKeys[i] == key) return static_cast<Entry>(i);
    }
    return std::nullopt;
}

CostTable::Entry CostTable::entry_for(Occupancy occupancy, CostKind kind) {
    switch (occupancy) {
        case Occupancy::Commercial:
            switch (kind) {
                case CostKind::Renovation: return Entry::CommercialRenovation;
                case CostKind::NewConstruction: return Entry::CommercialNewConstruction;
                case CostKind::Demolition: return Entry::CommercialDemolition;
            }
            break;
        case Occupancy::ResidentialApartment:
            switch (kind) {
                case CostKind::Renovation: return Entry::ResidentialApartmentRenovation;
                case CostKind::NewConstruction: return Entry::ResidentialApartmentNewConstruction;
                case CostKind::Demolition: return Entry::ResidentialDemolition;
            }
            break;
        case Occupancy::ResidentialSingleFamily:
            switch (kind) {
                case CostKind::Renovation: return Entry::ResidentialSingleFamilyRenovation;
                case CostKind::NewConstruction:
                    return Entry::ResidentialSingleFamilyNewConstruction;
                case CostKind::Demolition: return Entry::ResidentialDemolition;
            }
            break;
    }
    return Entry::ResidentialDemolition;
}

void CostTable::set(Entry entry, std::optional<double> usd_per_sqft) {
    if (usd_per_sqft && !(std::isfinite(*usd_per_sqft) && *usd_per_sqft >= 0.0)) {
        throw ConfigError("costs." + std::string(key(entry)), "unit cost must be >= 0");
    }
    values_[index(entry)] = usd_per_sqft;
}

double CostTable::unit_cost(Occupancy occupancy, CostKind kind) const {
    const Entry e = entry_for(occupancy, kind);
    if (!values_[index(e)]) throw MissingCostEntry(std::string(key(e)));
    return *values_[index(e)];
}

nlohmann::json CostTable::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < kEntryCount; ++i) {
        const std::string k(kKeys[i]);
        j[k] = values_[i] ? nlohmann::json(*values_[i]) : nlohmann::json(nullptr);
    }
    return j;
}

void CostTable::merge_json(const nlohmann::json& j, const std::string& prefix) {
    if (!j.is_object()) throw ConfigError(prefix, "expected an object of unit costs");
    std::vector<FieldError> errors;
    CostTable merged = *this;
    for (const auto& [k, value] : j.items()) {
        const auto entry = parse_key(k);
        if (!entry) {
            errors.push_back({prefix + "." + k, "unknown cost entry"});
            continue;
        }
        if (value.is_null()) {
            merged.values_[index(*entry)].reset();
        } else if (!value.is_number() || !(value.get<double>() >= 0.0)) {
            errors.push_back({prefix + "." + k, "unit cost must be a number >= 0"});
        } else {
            merged.values_[index(*entry)] = value.get<double>();
        }
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    *this = merged;
}

double construction_cost(Action action, const Building& b, const CostTable& table) {
    const double area = b.total_floor_area();
    switch (action) {
        case Action::Keep: return 0.0;
        case Action::Demolish: return table.unit_cost(b.occupancy, CostKind::Demolition) * area;
        case Action::Renovate: return table.unit_cost(b.occupancy, CostKind::Renovation) * area;
        case Action::NewConstruction:
            return table.unit_cost(b.occupancy, CostKind::NewConstruction) * area;
        case Action::Replace:
            return table.unit_cost(b.occupancy, CostKind::Demolition) * area +
                   table.unit_cost(b.occupancy, CostKind::NewConstruction) * area;
    }
    return 0.0;
}

DacPricing DacPricing::checked(double usd_per_tonne) {
    if (!(std::isfinite(usd_per_tonne) && usd_per_tonne > 0.0)) {
        throw ConfigError("dac_price", "must be a positive number");
    }
    return DacPricing{usd_per_tonne};
}

double dac_cost(double emissions_kg, const DacPricing& pricing) {
    return emissions_kg / 1000.0 * pricing.usd_per_tonne;
}

}  // namespace ecosim
