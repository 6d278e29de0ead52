#pragma once

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ecosim/archetype_model.hpp"
#include "ecosim/building_stock.hpp"
#include "ecosim/simulation.hpp"

namespace ecosim::test {

inline Building building(std::string id, const std::string& code, double area, int floors,
                         int year_built, Occupancy occupancy = Occupancy::Commercial,
                         std::string activity = "office") {
    const auto c = ArchetypeCode::parse(code);
    Building b;
    b.id = std::move(id);
    b.latitude = 39.8;
    b.longitude = -86.1;
    b.footprint_area = area;
    b.floors = floors;
    b.year_built = year_built;
    b.occupancy = occupancy;
    b.activity_type = std::move(activity);
    b.structure_type = c.structure;
    b.foundation_type = c.foundation;
    b.wall_material = std::string(c.wall.begin(), c.wall.end());
    b.roof_material = std::string(c.roof.begin(), c.roof.end());
    return b;
}

inline EmissionTable table_from(const std::string& csv_text) {
    std::istringstream in(csv_text);
    return load_emission_table(in);
}

// Three archetypes with round numbers, plus their wood counterparts.
inline EmissionTable small_table() {
    return table_from(
        "code,stage_A,stage_B,stage_C\n"
        "WBW2R1,50000,10000,5000\n"
        "MSW3R2,80000,12000,7000\n"
        "SCW5R4,120000,20000,9000\n"
        "WSW3R2,40000,8000,4000\n"
        "WCW5R4,60000,9000,3000\n");
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("ecosim-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(ECOSIM_TEST_DATA_DIR) / name;
}

inline SimulationModels models_with(EmissionTable table) {
    SimulationModels m;
    m.emissions = EmissionModel(std::move(table), FallbackPolicy::Strict);
    return m;
}

}  // namespace ecosim::test
