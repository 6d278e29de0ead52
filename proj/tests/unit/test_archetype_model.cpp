#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ecosim/archetype_model.hpp"
#include "ecosim/error.hpp"
#include "ecosim/random.hpp"
#include "ecosim/synthetic.hpp"

using namespace ecosim;

namespace {

std::ifstream fixture(const std::string& name) {
    std::ifstream in(std::string(ECOSIM_TEST_DATA_DIR) + "/" + name);
    EXPECT_TRUE(in.good()) << name;
    return in;
}

EmissionTable small_table() {
    auto in = fixture("emissions_small.csv");
    return load_emission_table(in);
}

Building building(const std::string& code, double area, int floors,
                  std::string activity = "residential") {
    const auto c = ArchetypeCode::parse(code);
    Building b;
    b.id = code;
    b.footprint_area = area;
    b.floors = floors;
    b.activity_type = std::move(activity);
    b.structure_type = c.structure;
    b.foundation_type = c.foundation;
    b.wall_material = std::string(c.wall.begin(), c.wall.end());
    b.roof_material = std::string(c.roof.begin(), c.roof.end());
    return b;
}

}  // namespace

TEST(EmissionTable, RowTotal) {
    const auto table = small_table();
    ASSERT_EQ(table.size(), 3u);
    const auto& r = table.at(ArchetypeCode::parse("WBW2R1"));
    EXPECT_EQ(r.total(), 65000.0);
    EXPECT_EQ(r.stage(Stage::A), 50000.0);
    EXPECT_EQ(r.stage(Stage::C), 5000.0);
}

TEST(EmissionTable, AbsentStageContributesNothing) {
    const auto table = small_table();
    const auto& r = table.at(ArchetypeCode::parse("SCW5R4"));
    EXPECT_FALSE(r.stage_emissions[1].has_value());
    EXPECT_EQ(r.total(), 129000.0);
}

TEST(EmissionTable, EmptyTableGivesEmptyMap) {
    std::istringstream empty("");
    EXPECT_TRUE(load_emission_table(empty).empty());
    std::istringstream header_only("code,stage_A,stage_B,stage_C\n");
    const auto table = load_emission_table(header_only);
    EXPECT_TRUE(table.empty());
    const EmissionModel model(table, FallbackPolicy::GlobalMean);
    EXPECT_THROW(model.record_for(ArchetypeCode::parse("WBW2R1")), MissingArchetype);
}

TEST(EmissionTable, DuplicateCode) {
    auto in = fixture("emissions_duplicate.csv");
    EXPECT_THROW(load_emission_table(in), DuplicateArchetype);
}

TEST(EmissionTable, NegativeAndMalformed) {
    std::istringstream negative("code,stage_A,stage_B,stage_C\nWBW2R1,-1,0,0\n");
    EXPECT_THROW(load_emission_table(negative), NegativeEmission);
    std::istringstream text("code,stage_A,stage_B,stage_C\nWBW2R1,abc,0,0\n");
    EXPECT_THROW(load_emission_table(text), MalformedRow);
    std::istringstream short_code("code,stage_A,stage_B,stage_C\nWBW2,1,0,0\n");
    EXPECT_THROW(load_emission_table(short_code), MalformedRow);
    std::istringstream missing("code,stage_A,stage_B\nWBW2R1,1,0\n");
    EXPECT_THROW(load_emission_table(missing), MalformedRow);
}

TEST(EmbodiedEmission, StandardUnitIdentity) {
    const auto table = small_table();
    EXPECT_EQ(embodied_emission(building("WBW2R1", 1000, 1), table, EmissionSelector::all(),
                                FallbackPolicy::Strict),
              65000.0);
}

TEST(EmbodiedEmission, StageAScaledToFourThousandSquareFeet) {
    const auto table = small_table();
    // 50,000 x (2,000 x 2) / 1,000.
    EXPECT_EQ(embodied_emission(building("WBW2R1", 2000, 2), table,
                                EmissionSelector::only(Stage::A), FallbackPolicy::Strict),
              200000.0);
}

TEST(EmbodiedEmission, StrictMissingArchetype) {
    const auto table = small_table();
    EXPECT_THROW(embodied_emission(building("CBW9R9", 1000, 1), table, EmissionSelector::all(),
                                   FallbackPolicy::Strict),
                 MissingArchetype);
}

TEST(EmbodiedEmission, NearestByStructureAveragesSameStructure) {
    std::istringstream in(
        "code,stage_A,stage_B,stage_C\n"
        "WBW2R1,100,10,1\n"
        "WSW3R2,300,30,3\n"
        "MBW2R1,1000,100,10\n");
    const EmissionModel model(load_emission_table(in), FallbackPolicy::NearestByStructure);
    const auto& r = model.record_for(ArchetypeCode::parse("WCW9R9"));
    EXPECT_DOUBLE_EQ(r.stage(Stage::A), 200.0);
    EXPECT_DOUBLE_EQ(r.stage(Stage::B), 20.0);
    EXPECT_DOUBLE_EQ(r.stage(Stage::C), 2.0);
    // No steel record at all: falls through to the global mean.
    const auto& g = model.record_for(ArchetypeCode::parse("SBW2R1"));
    EXPECT_DOUBLE_EQ(g.stage(Stage::A), 1400.0 / 3.0);
}

TEST(EmbodiedEmission, GlobalMean) {
    std::istringstream in(
        "code,stage_A,stage_B,stage_C\n"
        "WBW2R1,100,10,1\n"
        "MBW2R1,300,30,3\n");
    const EmissionModel model(load_emission_table(in), FallbackPolicy::GlobalMean);
    EXPECT_DOUBLE_EQ(model.record_for(ArchetypeCode::parse("WCW9R9")).total(), 222.0);
    EXPECT_DOUBLE_EQ(model.record_for(ArchetypeCode::parse("WBW2R1")).total(), 111.0);
}

TEST(EmbodiedEmission, SelectorFromLetters) {
    EXPECT_EQ(EmissionSelector::from_letters({"A", "B", "C"}), EmissionSelector::all());
    const auto ac = EmissionSelector::from_letters({"A", "C"});
    EXPECT_TRUE(ac.contains(Stage::A));
    EXPECT_FALSE(ac.contains(Stage::B));
    EXPECT_THROW(EmissionSelector::from_letters({}), ConfigError);
    EXPECT_THROW(EmissionSelector::from_letters({"D"}), ConfigError);
}

TEST(ScalingProperty, LinearInAreaAndFloors) {
    const auto table = synthetic_emission_table(3);
    const EmissionModel model(table, FallbackPolicy::Strict);
    RandomStream rng(21);
    const auto codes = [&] {
        std::vector<std::string> out;
        for (const auto& [code, r] : table) out.push_back(code.str());
        std::sort(out.begin(), out.end());
        return out;
    }();
    for (int i = 0; i < 200; ++i) {
        const auto code = codes[rng.index(codes.size())];
        const double area = rng.uniform(100.0, 50000.0);
        const int floors = 1 + static_cast<int>(rng.index(20));
        const double base = embodied_emission(building(code, area, floors), model,
                                              EmissionSelector::all());
        const double twice_area = embodied_emission(building(code, 2 * area, floors), model,
                                                    EmissionSelector::all());
        const double twice_floors = embodied_emission(building(code, area, 2 * floors), model,
                                                      EmissionSelector::all());
        EXPECT_LE(std::abs(twice_area - 2 * base), 1e-12 * 2 * base);
        EXPECT_LE(std::abs(twice_floors - 2 * base), 1e-12 * 2 * base);
    }
}

TEST(ScalingProperty, StageAdditivity) {
    RandomStream rng(8);
    for (int i = 0; i < 100; ++i) {
        ArchetypeEmissionRecord r;
        r.code = ArchetypeCode::parse("WBW2R1");
        for (auto& s : r.stage_emissions) {
            if (rng.uniform01() < 0.9) s = rng.uniform(0.0, 1e6);
        }
        const double area = rng.uniform(100.0, 1e5);
        const double all = scale_to_area(r, EmissionSelector::all(), area);
        double parts = 0.0;
        for (Stage s : kStages) parts += scale_to_area(r, EmissionSelector::only(s), area);
        EXPECT_LE(std::abs(all - parts), 1e-12 * std::max(1.0, all));
        EXPECT_GE(all, 0.0);
    }
}

TEST(OperationalEmission, Examples) {
    const auto intensities = [] {
        auto in = fixture("intensity_small.csv");
        return OperationalIntensityTable::load(in);
    }();
    auto b = building("WBW2R1", 1000, 1, "unlisted");
    EXPECT_EQ(operational_emission(b, intensities, 0.0), 0.0);
    EXPECT_EQ(operational_emission(b, intensities, 10.0), 80000.0);
    b.activity_type = "observatory";
    EXPECT_EQ(operational_emission(b, intensities, 10.0), 80000.0);
    b.activity_type = "office";
    EXPECT_EQ(operational_emission(b, intensities, 10.0), 90000.0);
    EXPECT_THROW(operational_emission(b, intensities, -1.0), ConfigError);
}

TEST(OperationalEmission, LinearInHorizon) {
    const auto table = OperationalIntensityTable::synthetic_default();
    const auto b = building("WBW2R1", 1234.5, 3, "hospital");
    const double one = operational_emission(b, table, 1.0);
    for (double h : {2.0, 7.0, 30.0, 100.0}) {
        EXPECT_NEAR(operational_emission(b, table, h), h * one, 1e-12 * h * one);
    }
}

TEST(OperationalEmission, TableRequiresDefaultRow) {
    std::istringstream in("activity,kgco2e_per_sqft_year\noffice,9\n");
    EXPECT_THROW(OperationalIntensityTable::load(in), DataError);
    std::istringstream negative("activity,kgco2e_per_sqft_year\n__default__,-1\n");
    EXPECT_THROW(OperationalIntensityTable::load(negative), DataError);
}
