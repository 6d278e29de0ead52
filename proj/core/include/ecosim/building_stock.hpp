#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ecosim {

enum class Occupancy { ResidentialSingleFamily, ResidentialApartment, Commercial };

std::string_view to_string(Occupancy occupancy);
// Accepts the enum names ("ResidentialSingleFamily") and snake_case forms
// ("residential_single_family"), case-insensitively.
std::optional<Occupancy> parse_occupancy(std::string_view text);

struct Building {
    std::string id;
    double latitude = 0.0;   // decimal degrees
    double longitude = 0.0;  // decimal degrees
    double footprint_area = 0.0;  // ft²
    int floors = 1;
    int year_built = 0;
    Occupancy occupancy = Occupancy::ResidentialSingleFamily;
    std::string activity_type;
    char structure_type = 'W';
    char foundation_type = 'B';
    std::string wall_material;  // two characters
    std::string roof_material;  // two characters

    double total_floor_area() const { return footprint_area * floors; }
};

// Archetype code A-B-CC-DD: structure, foundation, wall, roof.
struct ArchetypeCode {
    char structure = ' ';
    char foundation = ' ';
    std::array<char, 2> wall{' ', ' '};
    std::array<char, 2> roof{' ', ' '};

    // Canonical six character form, e.g. "WBW2R1".
    std::string str() const;

    // Splits a six character code by position. Throws DataError when the
    // length is wrong; alphabet membership is not checked here.
    static ArchetypeCode parse(std::string_view text);

    ArchetypeCode with_structure(char s) const {
        ArchetypeCode copy = *this;
        copy.structure = s;
        return copy;
    }

    auto operator<=>(const ArchetypeCode&) const = default;
};

enum class CodeAttribute { Structure, Foundation, Wall, Roof };

std::string_view to_string(CodeAttribute attribute);
std::size_t code_width(CodeAttribute attribute);

// Registered code alphabets with human readable labels. The defaults are
// placeholders for the published scheme and can be extended from JSON:
//
//   {"structure": {"W": "wood"}, "foundation": {...}, "wall": {...}, "roof": {...}}
class CodeRegistry {
public:
    static CodeRegistry defaults();
    static CodeRegistry from_json(const nlohmann::json& j);
    static CodeRegistry load(std::istream& in);

    nlohmann::json to_json() const;

    // Adds or relabels a code. Throws ConfigError if the width is wrong.
    void add(CodeAttribute attribute, std::string code, std::string label);
    // Merges every entry of `other` into this registry.
    void extend(const CodeRegistry& other);

    bool contains(CodeAttribute attribute, std::string_view code) const;
    std::optional<std::string> label(CodeAttribute attribute, std::string_view code) const;
    const std::map<std::string, std::string, std::less<>>& codes(CodeAttribute attribute) const;

private:
    std::array<std::map<std::string, std::string, std::less<>>, 4> tables_;
};

ArchetypeCode derive_archetype(const Building& b, const CodeRegistry& registry);

enum class AgeCategory { New, MidRange, Old };

std::string_view to_string(AgeCategory category);

// age < new_threshold -> New; age > old_threshold -> Old; otherwise MidRange.
// Throws InvalidThresholds unless 0 < new_threshold < old_threshold.
AgeCategory classify_age(int age, int new_threshold, int old_threshold);
AgeCategory classify_age(const Building& b, int reference_year, int new_threshold,
                         int old_threshold);

int current_year();

// Column names of the stock CSV. `height` is optional; when a row has no
// floor count but a height, floors = round(height / 10 ft).
struct StockSchema {
    std::string id = "id";
    std::string latitude = "lat";
    std::string longitude = "lon";
    std::string area = "area_sqft";
    std::string floors = "floors";
    std::string year_built = "year_built";
    std::string occupancy = "occupancy";
    std::string activity = "activity";
    std::string structure = "structure";
    std::string foundation = "foundation";
    std::string wall = "wall";
    std::string roof = "roof";
    std::string height = "height_ft";

    // Overrides any subset of the defaults; keys are the default names.
    static StockSchema from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    bool operator==(const StockSchema&) const = default;
};

enum class RowPolicy { Skip, Abort };

struct LoadOptions {
    StockSchema schema;
    RowPolicy policy = RowPolicy::Abort;
    int reference_year = current_year();
    CodeRegistry registry = CodeRegistry::defaults();
};

struct StockDiagnostic {
    std::size_t row;  // 1-based data row
    std::string message;
};

struct LoadResult {
    std::vector<Building> buildings;
    std::vector<StockDiagnostic> diagnostics;
};

// Reads a stock CSV. Valid rows are returned in file order. Invalid rows
// either abort with RowError or are skipped and reported in diagnostics,
// depending on the policy. Throws MissingColumn when the header does not
// carry a mapped column.
LoadResult load_stock(std::istream& in, const LoadOptions& options = {});

// Writes the mapped columns (without height) in default column order.
void write_stock(std::ostream& out, std::span<const Building> stock,
                 const StockSchema& schema = {});

// Uniform sample of n buildings without replacement (partial Fisher-Yates),
// deterministic for a given seed and stock order. Throws SampleTooLarge
// when n > |stock| and DataError when n == 0.
std::vector<Building> sample_stock(std::span<const Building> stock, std::size_t n,
                                   std::uint64_t seed);

}  // namespace ecosim

template <>
struct std::hash<ecosim::ArchetypeCode> {
    std::size_t operator()(const ecosim::ArchetypeCode& code) const noexcept;
};
