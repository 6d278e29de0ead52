#include "ecosim/archetype_model.hpp"

#include <cmath>
#include <unordered_set>

#include "ecosim/csv.hpp"
#include "ecosim/error.hpp"

namespace ecosim {

char stage_letter(Stage stage) { return static_cast<char>('A' + static_cast<int>(stage)); }

EmissionSelector EmissionSelector::only(Stage stage) {
    return EmissionSelector(static_cast<std::uint8_t>(1U << static_cast<int>(stage)));
}

EmissionSelector EmissionSelector::from_letters(const std::vector<std::string>& letters) {
    std::uint8_t mask = 0;
    for (const std::string& letter : letters) {
        if (letter.size() != 1 || letter[0] < 'A' || letter[0] > 'C') {
            throw ConfigError("selector", "unknown life-cycle stage '" + letter + "'");
        }
        mask |= static_cast<std::uint8_t>(1U << (letter[0] - 'A'));
    }
    if (mask == 0) throw ConfigError("selector", "at least one stage is required");
    return EmissionSelector(mask);
}

std::vector<std::string> EmissionSelector::letters() const {
    std::vector<std::string> out;
    for (Stage s : kStages) {
        if (contains(s)) out.emplace_back(1, stage_letter(s));
    }
    return out;
}

double ArchetypeEmissionRecord::total() const {
    return stage(Stage::A) + stage(Stage::B) + stage(Stage::C);
}

double ArchetypeEmissionRecord::selected(EmissionSelector selector) const {
    double sum = 0.0;
    for (Stage s : kStages) {
        if (selector.contains(s)) sum += stage(s);
    }
    return sum;
}

EmissionTable load_emission_table(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    EmissionTable table;
    if (!reader.next(fields)) return table;

    std::array<std::optional<std::size_t>, 4> columns{};
    const std::array<std::string_view, 4> names{"code", "stage_A", "stage_B", "stage_C"};
    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (std::size_t k = 0; k < names.size(); ++k) {
            if (csv::trim(fields[i]) == names[k]) columns[k] = i;
        }
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (!columns[k]) throw MalformedRow(0, "header lacks column " + std::string(names[k]));
    }

    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() == 1 && csv::trim(fields[0]).empty()) continue;
        auto cell = [&](std::size_t k) -> std::string_view {
            if (*columns[k] >= fields.size()) throw MalformedRow(row, "too few fields");
            return csv::trim(fields[*columns[k]]);
        };
        const std::string code_text(cell(0));
        if (code_text.size() != 6) throw MalformedRow(row, "archetype code must be 6 characters");
        ArchetypeEmissionRecord record;
        record.code = ArchetypeCode::parse(code_text);
        for (Stage s : kStages) {
            const auto text = cell(1 + static_cast<std::size_t>(s));
            if (text.empty()) continue;
            auto value = csv::parse_double(text);
            if (!value || !std::isfinite(*value)) {
                throw MalformedRow(row, "unparseable stage " + std::string(1, stage_letter(s)));
            }
            if (*value < 0.0) throw NegativeEmission(code_text, stage_letter(s));
            record.stage_emissions[static_cast<int>(s)] = *value;
        }
        if (!table.emplace(record.code, record).second) throw DuplicateArchetype(code_text);
    }
    return table;
}

std::string_view to_string(FallbackPolicy policy) {
    switch (policy) {
        case FallbackPolicy::Strict: return "strict";
        case FallbackPolicy::NearestByStructure: return "nearest_by_structure";
        case FallbackPolicy::GlobalMean: return "global_mean";
    }
    return "?";
}

std::optional<FallbackPolicy> parse_fallback_policy(std::string_view text) {
    if (text == "strict") return FallbackPolicy::Strict;
    if (text == "nearest_by_structure") return FallbackPolicy::NearestByStructure;
    if (text == "global_mean") return FallbackPolicy::GlobalMean;
    return std::nullopt;
}

namespace {

// Stage-wise mean over the records that carry each stage. Iteration order
// of the unordered table would make the floating-point sum depend on hash
// layout, so records are visited in sorted code order.
ArchetypeEmissionRecord mean_record(const std::vector<const ArchetypeEmissionRecord*>& records) {
    ArchetypeEmissionRecord mean;
    for (Stage s : kStages) {
        const int k = static_cast<int>(s);
        double sum = 0.0;
        int count = 0;
        for (const auto* r : records) {
            if (r->stage_emissions[k]) {
                sum += *r->stage_emissions[k];
                ++count;
            }
        }
        if (count > 0) mean.stage_emissions[k] = sum / count;
    }
    return mean;
}

}  // namespace

EmissionModel::EmissionModel(EmissionTable table, FallbackPolicy policy)
    : table_(std::move(table)), policy_(policy) {
    std::map<ArchetypeCode, const ArchetypeEmissionRecord*> sorted;
    for (const auto& [code, record] : table_) sorted.emplace(code, &record);

    std::vector<const ArchetypeEmissionRecord*> all;
    std::map<char, std::vector<const ArchetypeEmissionRecord*>> by_structure;
    for (const auto& [code, record] : sorted) {
        all.push_back(record);
        by_structure[code.structure].push_back(record);
    }
    if (!all.empty()) global_mean_ = mean_record(all);
    for (const auto& [structure, records] : by_structure) {
        structure_means_.emplace(structure, mean_record(records));
    }
}

const ArchetypeEmissionRecord& EmissionModel::record_for(const ArchetypeCode& code) const {
    if (auto it = table_.find(code); it != table_.end()) return it->second;
    switch (policy_) {
        case FallbackPolicy::Strict:
            break;
        case FallbackPolicy::NearestByStructure:
            if (auto it = structure_means_.find(code.structure); it != structure_means_.end()) {
                return it->second;
            }
            [[fallthrough]];
        case FallbackPolicy::GlobalMean:
            if (global_mean_) return *global_mean_;
            break;
    }
    throw MissingArchetype(code.str());
}

ArchetypeCode archetype_of(const Building& b) {
    ArchetypeCode code;
    code.structure = b.structure_type;
    code.foundation = b.foundation_type;
    code.wall = {b.wall_material.size() > 0 ? b.wall_material[0] : ' ',
                 b.wall_material.size() > 1 ? b.wall_material[1] : ' '};
    code.roof = {b.roof_material.size() > 0 ? b.roof_material[0] : ' ',
                 b.roof_material.size() > 1 ? b.roof_material[1] : ' '};
    return code;
}

double scale_to_area(const ArchetypeEmissionRecord& record, EmissionSelector selector,
                     double total_floor_area) {
    return record.selected(selector) * total_floor_area / kStandardUnitArea;
}

double embodied_emission(const Building& b, const EmissionModel& model,
                         EmissionSelector selector) {
    return scale_to_area(model.record_for(archetype_of(b)), selector, b.total_floor_area());
}

double embodied_emission(const Building& b, const EmissionTable& table,
                         EmissionSelector selector, FallbackPolicy fallback) {
    if (auto it = table.find(archetype_of(b)); it != table.end()) {
        return scale_to_area(it->second, selector, b.total_floor_area());
    }
    return embodied_emission(b, EmissionModel(table, fallback), selector);
}

OperationalIntensityTable::OperationalIntensityTable(double default_intensity)
    : default_(default_intensity) {
    if (!(default_intensity >= 0.0)) throw DataError("default intensity must be non-negative");
}

OperationalIntensityTable OperationalIntensityTable::load(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw MalformedRow(0, "empty intensity table");
    std::optional<std::size_t> activity_col, value_col;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = csv::trim(fields[i]);
        if (name == "activity") activity_col = i;
        if (name == "kgco2e_per_sqft_year") value_col = i;
    }
    if (!activity_col) throw MissingColumn("activity");
    if (!value_col) throw MissingColumn("kgco2e_per_sqft_year");

    std::map<std::string, double, std::less<>> entries;
    std::optional<double> fallback;
    std::size_t row = 0;
    while (reader.next(fields)) {
        ++row;
        if (fields.size() == 1 && csv::trim(fields[0]).empty()) continue;
        if (std::max(*activity_col, *value_col) >= fields.size()) {
            throw MalformedRow(row, "too few fields");
        }
        const std::string activity(csv::trim(fields[*activity_col]));
        auto value = csv::parse_double(fields[*value_col]);
        if (!value || !std::isfinite(*value)) throw MalformedRow(row, "unparseable intensity");
        if (*value < 0.0) throw MalformedRow(row, "negative intensity");
        if (activity == kDefaultActivity) {
            fallback = *value;
        } else if (!entries.emplace(activity, *value).second) {
            throw MalformedRow(row, "duplicate activity '" + activity + "'");
        }
    }
    if (!fallback) throw DataError("intensity table lacks a __default__ row");
    OperationalIntensityTable table(*fallback);
    table.entries_ = std::move(entries);
    return table;
}

OperationalIntensityTable OperationalIntensityTable::synthetic_default() {
    OperationalIntensityTable table(8.0);
    table.set("residential", 5.0);
    table.set("office", 9.0);
    table.set("retail", 10.0);
    table.set("educational", 7.0);
    table.set("hospital", 20.0);
    return table;
}

void OperationalIntensityTable::set(std::string activity, double intensity) {
    if (!(intensity >= 0.0)) throw DataError("intensity must be non-negative");
    entries_[std::move(activity)] = intensity;
}

double OperationalIntensityTable::intensity(std::string_view activity) const {
    if (auto it = entries_.find(activity); it != entries_.end()) return it->second;
    return default_;
}

double operational_emission(const Building& b, const OperationalIntensityTable& table,
                            double horizon_years) {
    if (!(horizon_years >= 0.0)) throw ConfigError("horizon_years", "must be non-negative");
    return table.intensity(b.activity_type) * b.footprint_area * b.floors * horizon_years;
}

}  // namespace ecosim
