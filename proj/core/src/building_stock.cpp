#include "ecosim/building_stock.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ecosim/csv.hpp"
#include "ecosim/error.hpp"
#include "ecosim/random.hpp"

namespace ecosim {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

constexpr std::array<CodeAttribute, 4> kAttributes{CodeAttribute::Structure,
                                                   CodeAttribute::Foundation,
                                                   CodeAttribute::Wall, CodeAttribute::Roof};

std::size_t slot(CodeAttribute attribute) { return static_cast<std::size_t>(attribute); }

}  // namespace

std::string_view to_string(Occupancy occupancy) {
    switch (occupancy) {
        case Occupancy::ResidentialSingleFamily: return "ResidentialSingleFamily";
        case Occupancy::ResidentialApartment: return "ResidentialApartment";
        case Occupancy::Commercial: return "Commercial";
    }
    return "?";
}

std::optional<Occupancy> parse_occupancy(std::string_view text) {
    const std::string key = lower(csv::trim(text));
    if (key == "residentialsinglefamily" || key == "residential_single_family" ||
        key == "single_family")
        return Occupancy::ResidentialSingleFamily;
    if (key == "residentialapartment" || key == "residential_apartment" || key == "apartment")
        return Occupancy::ResidentialApartment;
    if (key == "commercial") return Occupancy::Commercial;
    return std::nullopt;
}

std::string ArchetypeCode::str() const {
    return std::string{structure, foundation, wall[0], wall[1], roof[0], roof[1]};
}

ArchetypeCode ArchetypeCode::parse(std::string_view text) {
    if (text.size() != 6) {
        throw DataError("archetype code '" + std::string(text) + "' is not 6 characters");
    }
    ArchetypeCode code;
    code.structure = text[0];
    code.foundation = text[1];
    code.wall = {text[2], text[3]};
    code.roof = {text[4], text[5]};
    return code;
}

std::string_view to_string(CodeAttribute attribute) {
    switch (attribute) {
        case CodeAttribute::Structure: return "structure";
        case CodeAttribute::Foundation: return "foundation";
        case CodeAttribute::Wall: return "wall";
        case CodeAttribute::Roof: return "roof";
    }
    return "?";
}

std::size_t code_width(CodeAttribute attribute) {
    return attribute == CodeAttribute::Structure || attribute == CodeAttribute::Foundation ? 1
                                                                                           : 2;
}

CodeRegistry CodeRegistry::defaults() {
    CodeRegistry r;
    r.add(CodeAttribute::Structure, "W", "wood");
    r.add(CodeAttribute::Structure, "S", "steel");
    r.add(CodeAttribute::Structure, "M", "masonry");
    r.add(CodeAttribute::Structure, "C", "concrete");
    r.add(CodeAttribute::Foundation, "B", "basement");
    r.add(CodeAttribute::Foundation, "S", "slab");
    r.add(CodeAttribute::Foundation, "C", "crawlspace");
    for (int i = 1; i <= 9; ++i) {
        const std::string n = std::to_string(i);
        r.add(CodeAttribute::Wall, "W" + n, "wall material " + n);
        r.add(CodeAttribute::Roof, "R" + n, "roof type " + n);
    }
    r.add(CodeAttribute::Wall, "W2", "masonry");
    r.add(CodeAttribute::Roof, "R1", "shingle");
    return r;
}

CodeRegistry CodeRegistry::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("registry", "expected a JSON object");
    CodeRegistry r;
    for (CodeAttribute attribute : kAttributes) {
        const std::string key(to_string(attribute));
        if (!j.contains(key)) continue;
        const auto& table = j.at(key);
        if (!table.is_object()) throw ConfigError("registry." + key, "expected an object");
        for (const auto& [code, label] : table.items()) {
            if (!label.is_string()) {
                throw ConfigError("registry." + key + "." + code, "label must be a string");
            }
            r.add(attribute, code, label.get<std::string>());
        }
    }
    return r;
}

CodeRegistry CodeRegistry::load(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("registry", e.what());
    }
    return from_json(j);
}

nlohmann::json CodeRegistry::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (CodeAttribute attribute : kAttributes) {
        auto& table = j[std::string(to_string(attribute))] = nlohmann::json::object();
        for (const auto& [code, label] : tables_[slot(attribute)]) table[code] = label;
    }
    return j;
}

void CodeRegistry::add(CodeAttribute attribute, std::string code, std::string label) {
    if (code.size() != code_width(attribute)) {
        throw ConfigError("registry." + std::string(to_string(attribute)) + "." + code,
                          "code must be " + std::to_string(code_width(attribute)) +
                              " character(s)");
    }
    tables_[slot(attribute)][std::move(code)] = std::move(label);
}

void CodeRegistry::extend(const CodeRegistry& other) {
    for (CodeAttribute attribute : kAttributes) {
        for (const auto& [code, label] : other.codes(attribute)) add(attribute, code, label);
    }
}

bool CodeRegistry::contains(CodeAttribute attribute, std::string_view code) const {
    const auto& table = tables_[slot(attribute)];
    return table.find(code) != table.end();
}

std::optional<std::string> CodeRegistry::label(CodeAttribute attribute,
                                               std::string_view code) const {
    const auto& table = tables_[slot(attribute)];
    auto it = table.find(code);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

const std::map<std::string, std::string, std::less<>>& CodeRegistry::codes(
    CodeAttribute attribute) const {
    return tables_[slot(attribute)];
}

ArchetypeCode derive_archetype(const Building& b, const CodeRegistry& registry) {
    const std::string structure(1, b.structure_type);
    const std::string foundation(1, b.foundation_type);
    const std::array<std::pair<CodeAttribute, const std::string*>, 4> parts{{
        {CodeAttribute::Structure, &structure},
        {CodeAttribute::Foundation, &foundation},
        {CodeAttribute::Wall, &b.wall_material},
        {CodeAttribute::Roof, &b.roof_material},
    }};
    for (const auto& [attribute, value] : parts) {
        if (!registry.contains(attribute, *value)) {
            throw UnknownCode(std::string(to_string(attribute)), *value);
        }
    }
    return ArchetypeCode::parse(structure + foundation + b.wall_material + b.roof_material);
}

std::string_view to_string(AgeCategory category) {
    switch (category) {
        case AgeCategory::New: return "New";
        case AgeCategory::MidRange: return "MidRange";
        case AgeCategory::Old: return "Old";
    }
    return "?";
}

AgeCategory classify_age(int age, int new_threshold, int old_threshold) {
    if (!(0 < new_threshold && new_threshold < old_threshold)) {
        throw InvalidThresholds(new_threshold, old_threshold);
    }
    if (age < new_threshold) return AgeCategory::New;
    if (age > old_threshold) return AgeCategory::Old;
    return AgeCategory::MidRange;
}

AgeCategory classify_age(const Building& b, int reference_year, int new_threshold,
                         int old_threshold) {
    return classify_age(reference_year - b.year_built, new_threshold, old_threshold);
}

int current_year() {
    const auto now = std::chrono::system_clock::now();
    const std::chrono::year_month_day ymd{std::chrono::floor<std::chrono::days>(now)};
    return static_cast<int>(ymd.year());
}

namespace {

template <typename Schema>
auto schema_fields(Schema& s) {
    return std::array<std::pair<const char*, decltype(&s.id)>, 13>{{
        {"id", &s.id},
        {"lat", &s.latitude},
        {"lon", &s.longitude},
        {"area_sqft", &s.area},
        {"floors", &s.floors},
        {"year_built", &s.year_built},
        {"occupancy", &s.occupancy},
        {"activity", &s.activity},
        {"structure", &s.structure},
        {"foundation", &s.foundation},
        {"wall", &s.wall},
        {"roof", &s.roof},
        {"height_ft", &s.height},
    }};
}

}  // namespace

StockSchema StockSchema::from_json(const nlohmann::json& j) {
    StockSchema s;
    if (j.is_null()) return s;
    if (!j.is_object()) throw ConfigError("stock_schema", "expected a JSON object");
    const auto fields = schema_fields(s);
    for (const auto& [key, value] : j.items()) {
        auto it = std::find_if(fields.begin(), fields.end(),
                               [&](const auto& f) { return key == f.first; });
        if (it == fields.end()) throw ConfigError("stock_schema." + key, "unknown column key");
        if (!value.is_string()) {
            throw ConfigError("stock_schema." + key, "expected a column name");
        }
        *it->second = value.get<std::string>();
    }
    return s;
}

nlohmann::json StockSchema::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : schema_fields(*this)) j[key] = *value;
    return j;
}

namespace {

struct ColumnIndex {
    std::size_t id, latitude, longitude, area, year_built, occupancy, activity, structure,
        foundation, wall, roof;
    std::optional<std::size_t> floors, height;
};

ColumnIndex resolve_columns(const std::vector<std::string>& header, const StockSchema& schema) {
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < header.size(); ++i) {
        position.emplace(std::string(csv::trim(header[i])), i);
    }
    auto find = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = position.find(name);
        if (it == position.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const std::string& name) {
        auto idx = find(name);
        if (!idx) throw MissingColumn(name);
        return *idx;
    };
    ColumnIndex c{};
    c.id = require(schema.id);
    c.latitude = require(schema.latitude);
    c.longitude = require(schema.longitude);
    c.area = require(schema.area);
    c.year_built = require(schema.year_built);
    c.occupancy = require(schema.occupancy);
    c.activity = require(schema.activity);
    c.structure = require(schema.structure);
    c.foundation = require(schema.foundation);
    c.wall = require(schema.wall);
    c.roof = require(schema.roof);
    c.floors = find(schema.floors);
    c.height = find(schema.height);
    if (!c.floors && !c.height) throw MissingColumn(schema.floors);
    return c;
}

Building parse_row(const std::vector<std::string>& row, const ColumnIndex& c,
                   const LoadOptions& options, std::size_t row_index) {
    auto fail = [&](const std::string& why) { throw RowError(row_index, why); };
    auto cell = [&](std::size_t idx) -> std::string_view {
        if (idx >= row.size()) fail("too few fields");
        return csv::trim(row[idx]);
    };
    auto number = [&](std::size_t idx, const char* what) {
        auto v = csv::parse_double(cell(idx));
        if (!v || !std::isfinite(*v)) fail(std::string("unparseable ") + what);
        return *v;
    };
    auto integer = [&](std::size_t idx, const char* what) {
        auto v = csv::parse_int(cell(idx));
        if (!v) fail(std::string("unparseable ") + what);
        return *v;
    };

    Building b;
    b.id = std::string(cell(c.id));
    if (b.id.empty()) fail("empty id");
    b.latitude = number(c.latitude, "latitude");
    b.longitude = number(c.longitude, "longitude");
    if (b.latitude < -90.0 || b.latitude > 90.0) fail("latitude out of range");
    if (b.longitude < -180.0 || b.longitude > 180.0) fail("longitude out of range");
    b.footprint_area = number(c.area, "area");
    if (!(b.footprint_area > 0.0)) fail("area must be positive");

    const bool has_floors = c.floors && !cell(*c.floors).empty();
    if (has_floors) {
        const auto floors = integer(*c.floors, "floors");
        if (floors < 1 || floors > 1000) fail("floors must be at least 1");
        b.floors = static_cast<int>(floors);
    } else if (c.height && !cell(*c.height).empty()) {
        const double height = number(*c.height, "height");
        if (!(height > 0.0)) fail("height must be positive");
        b.floors = std::max(1, static_cast<int>(std::lround(height / 10.0)));
    } else {
        fail("missing floors and height");
    }

    const auto year = integer(c.year_built, "year_built");
    if (year > options.reference_year) fail("year_built after reference year");
    b.year_built = static_cast<int>(year);

    auto occupancy = parse_occupancy(cell(c.occupancy));
    if (!occupancy) fail("unknown occupancy '" + std::string(cell(c.occupancy)) + "'");
    b.occupancy = *occupancy;
    b.activity_type = std::string(cell(c.activity));

    const auto structure = cell(c.structure);
    const auto foundation = cell(c.foundation);
    if (structure.size() != 1) fail("structure code must be 1 character");
    if (foundation.size() != 1) fail("foundation code must be 1 character");
    b.structure_type = structure.front();
    b.foundation_type = foundation.front();
    b.wall_material = std::string(cell(c.wall));
    b.roof_material = std::string(cell(c.roof));
    try {
        derive_archetype(b, options.registry);
    } catch (const UnknownCode& e) {
        fail(e.what());
    }
    return b;
}

}  // namespace

LoadResult load_stock(std::istream& in, const LoadOptions& options) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw MissingColumn(options.schema.id);
    const ColumnIndex columns = resolve_columns(fields, options.schema);

    LoadResult result;
    std::size_t row_index = 0;
    while (reader.next(fields)) {
        ++row_index;
        if (fields.size() == 1 && csv::trim(fields[0]).empty()) continue;
        try {
            result.buildings.push_back(parse_row(fields, columns, options, row_index));
        } catch (const RowError& e) {
            if (options.policy == RowPolicy::Abort) throw;
            result.diagnostics.push_back({e.row(), e.reason()});
        }
    }
    return result;
}

void write_stock(std::ostream& out, std::span<const Building> stock, const StockSchema& schema) {
    csv::write_record(out, {schema.id, schema.latitude, schema.longitude, schema.area,
                            schema.floors, schema.year_built, schema.occupancy, schema.activity,
                            schema.structure, schema.foundation, schema.wall, schema.roof});
    for (const Building& b : stock) {
        csv::write_record(out, {b.id, csv::format_double(b.latitude),
                                csv::format_double(b.longitude),
                                csv::format_double(b.footprint_area), std::to_string(b.floors),
                                std::to_string(b.year_built), std::string(to_string(b.occupancy)),
                                b.activity_type, std::string(1, b.structure_type),
                                std::string(1, b.foundation_type), b.wall_material,
                                b.roof_material});
    }
}

std::vector<Building> sample_stock(std::span<const Building> stock, std::size_t n,
                                   std::uint64_t seed) {
    if (n == 0) throw DataError("sample size must be positive");
    if (n > stock.size()) throw SampleTooLarge(n, stock.size());
    std::vector<std::size_t> order(stock.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    RandomStream rng(splitmix64(seed));
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.index(order.size() - i));
        std::swap(order[i], order[j]);
    }
    std::vector<Building> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(stock[order[i]]);
    return out;
}

}  // namespace ecosim

std::size_t std::hash<ecosim::ArchetypeCode>::operator()(
    const ecosim::ArchetypeCode& code) const noexcept {
    std::uint64_t key = 0;
    for (char ch : code.str()) key = (key << 8) | static_cast<unsigned char>(ch);
    return static_cast<std::size_t>(ecosim::splitmix64(key));
}
