#include "ecosim/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "ecosim/csv.hpp"
#include "ecosim/random.hpp"

namespace ecosim {

namespace {

template <typename T>
const T& pick(RandomStream& rng, const std::vector<T>& values) {
    return values[rng.index(values.size())];
}

std::vector<std::string> registry_codes(const CodeRegistry& registry, CodeAttribute attribute) {
    std::vector<std::string> out;
    for (const auto& [code, label] : registry.codes(attribute)) out.push_back(code);
    return out;
}

double structure_base(char s) {
    switch (s) {
        case 'W': return 90000.0;
        case 'S': return 140000.0;
        case 'M': return 120000.0;
        case 'C': return 160000.0;
        default: return 110000.0;
    }
}

}  // namespace

std::vector<Building> synthetic_stock(std::size_t n, std::uint64_t seed, int reference_year) {
    const CodeRegistry registry = CodeRegistry::defaults();
    const auto structures = registry_codes(registry, CodeAttribute::Structure);
    const auto foundations = registry_codes(registry, CodeAttribute::Foundation);
    const auto walls = registry_codes(registry, CodeAttribute::Wall);
    const auto roofs = registry_codes(registry, CodeAttribute::Roof);
    const std::vector<std::string> commercial{"office", "retail", "educational", "hospital"};

    RandomStream rng(splitmix64(seed ^ 0x5eedc0de5eedc0deULL));
    std::vector<Building> stock;
    stock.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Building b;
        b.id = "B" + std::to_string(i + 1);
        b.latitude = std::round(rng.uniform(39.70, 39.90) * 1e6) / 1e6;
        b.longitude = std::round(rng.uniform(-86.30, -86.00) * 1e6) / 1e6;
        const double u = rng.uniform01();
        if (u < 0.6) {
            b.occupancy = Occupancy::ResidentialSingleFamily;
            b.activity_type = "residential";
            b.floors = 1 + static_cast<int>(rng.index(2));
            b.footprint_area = std::round(rng.uniform(800.0, 2500.0));
        } else if (u < 0.8) {
            b.occupancy = Occupancy::ResidentialApartment;
            b.activity_type = "residential";
            b.floors = 2 + static_cast<int>(rng.index(6));
            b.footprint_area = std::round(rng.uniform(3000.0, 12000.0));
        } else {
            b.occupancy = Occupancy::Commercial;
            b.activity_type = pick(rng, commercial);
            b.floors = 1 + static_cast<int>(rng.index(10));
            b.footprint_area = std::round(rng.uniform(2000.0, 20000.0));
        }
        b.year_built = reference_year - static_cast<int>(rng.index(121));
        b.structure_type = b.occupancy == Occupancy::ResidentialSingleFamily && rng.uniform01() < 0.8
                               ? 'W'
                               : pick(rng, structures)[0];
        b.foundation_type = pick(rng, foundations)[0];
        b.wall_material = pick(rng, walls);
        b.roof_material = pick(rng, roofs);
        stock.push_back(std::move(b));
    }
    return stock;
}

EmissionTable synthetic_emission_table(std::uint64_t seed) {
    const CodeRegistry registry = CodeRegistry::defaults();
    RandomStream rng(splitmix64(seed ^ 0x7ab1e7ab1e7ab1eULL));
    EmissionTable table;
    for (const auto& s : registry_codes(registry, CodeAttribute::Structure)) {
        for (const auto& f : registry_codes(registry, CodeAttribute::Foundation)) {
            for (const auto& w : registry_codes(registry, CodeAttribute::Wall)) {
                for (const auto& r : registry_codes(registry, CodeAttribute::Roof)) {
                    const auto code = ArchetypeCode::parse(s + f + w + r);
                    const double base = structure_base(code.structure) * rng.uniform(0.85, 1.15);
                    ArchetypeEmissionRecord record;
                    record.code = code;
                    record.stage_emissions[0] = std::round(base * 0.70);
                    record.stage_emissions[1] = std::round(base * rng.uniform(0.10, 0.20));
                    record.stage_emissions[2] = std::round(base * rng.uniform(0.05, 0.10));
                    table.emplace(code, record);
                }
            }
        }
    }
    return table;
}

void write_emission_table(std::ostream& out, const EmissionTable& table) {
    std::vector<ArchetypeCode> codes;
    for (const auto& [code, record] : table) codes.push_back(code);
    std::sort(codes.begin(), codes.end());
    csv::write_record(out, {"code", "stage_A", "stage_B", "stage_C"});
    for (const auto& code : codes) {
        const auto& record = table.at(code);
        std::vector<std::string> row{code.str()};
        for (const auto& stage : record.stage_emissions) {
            row.push_back(stage ? csv::format_double(*stage) : std::string());
        }
        csv::write_record(out, row);
    }
}

void write_intensity_table(std::ostream& out, const OperationalIntensityTable& table) {
    csv::write_record(out, {"activity", "kgco2e_per_sqft_year"});
    csv::write_record(out, {std::string(kDefaultActivity), csv::format_double(table.default_intensity())});
    for (const auto& [activity, value] : table.entries()) {
        if (activity == kDefaultActivity) continue;
        csv::write_record(out, {activity, csv::format_double(value)});
    }
}

}  // namespace ecosim
