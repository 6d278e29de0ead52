#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ecosim/building_stock.hpp"
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

LoadOptions options_2024() {
    LoadOptions o;
    o.reference_year = 2024;
    return o;
}

const char* kHeader = "id,lat,lon,area_sqft,floors,year_built,occupancy,activity,structure,foundation,wall,roof\n";

Building make(char s, char f, std::string w, std::string r) {
    Building b;
    b.id = "x";
    b.footprint_area = 1000;
    b.structure_type = s;
    b.foundation_type = f;
    b.wall_material = std::move(w);
    b.roof_material = std::move(r);
    return b;
}

}  // namespace

TEST(LoadStock, ThreeValidRowsInFileOrder) {
    auto in = fixture("stock_three.csv");
    const auto result = load_stock(in, options_2024());
    ASSERT_EQ(result.buildings.size(), 3u);
    EXPECT_TRUE(result.diagnostics.empty());
    EXPECT_EQ(result.buildings[0].id, "a1");
    EXPECT_EQ(result.buildings[1].id, "a2");
    EXPECT_EQ(result.buildings[2].id, "a3");
    EXPECT_EQ(result.buildings[1].occupancy, Occupancy::ResidentialApartment);
    EXPECT_EQ(result.buildings[2].floors, 5);
    EXPECT_DOUBLE_EQ(result.buildings[2].total_floor_area(), 40000.0);
}

TEST(LoadStock, NegativeAreaAbortsWithRowIndex) {
    std::istringstream in(std::string(kHeader) +
                          "a,39,-86,1000,1,1990,commercial,office,W,B,W2,R1\n"
                          "b,39,-86,-5,1,1990,commercial,office,W,B,W2,R1\n");
    try {
        load_stock(in, options_2024());
        FAIL() << "expected RowError";
    } catch (const RowError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
}

TEST(LoadStock, SkipPolicyReportsMalformedRows) {
    auto in = fixture("stock_ten_two_bad.csv");
    auto options = options_2024();
    options.policy = RowPolicy::Skip;
    const auto result = load_stock(in, options);
    // Rows 4 (non-numeric area) and 7 (truncated) are malformed.
    ASSERT_EQ(result.buildings.size(), 8u);
    ASSERT_EQ(result.diagnostics.size(), 2u);
    EXPECT_EQ(result.diagnostics[0].row, 4u);
    EXPECT_EQ(result.diagnostics[1].row, 7u);
    EXPECT_EQ(result.buildings[3].id, "r5");
}

TEST(LoadStock, AbortPolicyStopsAtFirstMalformedRow) {
    auto in = fixture("stock_ten_two_bad.csv");
    EXPECT_THROW(load_stock(in, options_2024()), RowError);
}

TEST(LoadStock, MissingColumn) {
    std::istringstream in("id,lat,lon,area_sqft,floors,year_built,occupancy,activity,structure,foundation,wall\n");
    try {
        load_stock(in, options_2024());
        FAIL();
    } catch (const MissingColumn& e) {
        EXPECT_EQ(e.column(), "roof");
    }
}

TEST(LoadStock, InvariantViolations) {
    const std::vector<std::string> bad_rows{
        "a,91,-86,1000,1,1990,commercial,office,W,B,W2,R1",   // latitude
        "a,39,-181,1000,1,1990,commercial,office,W,B,W2,R1",  // longitude
        "a,39,-86,0,1,1990,commercial,office,W,B,W2,R1",      // area
        "a,39,-86,1000,0,1990,commercial,office,W,B,W2,R1",   // floors
        "a,39,-86,1000,1,2030,commercial,office,W,B,W2,R1",   // future year
        "a,39,-86,1000,1,1990,castle,office,W,B,W2,R1",       // occupancy
        "a,39,-86,1000,1,1990,commercial,office,X,B,W2,R1",   // structure code
        "a,39,-86,1000,1,1990,commercial,office,W,B,Z9,R1",   // wall code
    };
    for (const auto& row : bad_rows) {
        std::istringstream in(std::string(kHeader) + row + "\n");
        EXPECT_THROW(load_stock(in, options_2024()), RowError) << row;
    }
}

TEST(LoadStock, HeightDerivesFloors) {
    std::istringstream in(
        "id,lat,lon,area_sqft,year_built,occupancy,activity,structure,foundation,wall,roof,height_ft\n"
        "h,39,-86,1000,1990,commercial,office,W,B,W2,R1,34\n"
        "g,39,-86,1000,1990,commercial,office,W,B,W2,R1,4\n");
    const auto result = load_stock(in, options_2024());
    ASSERT_EQ(result.buildings.size(), 2u);
    EXPECT_EQ(result.buildings[0].floors, 3);
    EXPECT_EQ(result.buildings[1].floors, 1);
}

TEST(LoadStock, CustomSchemaMapping) {
    std::istringstream in(
        "ID,LAT,LON,SQFT,STORIES,BUILT,OCC,USE,S,F,W,R\n"
        "m,39,-86,1000,2,1990,commercial,office,W,B,W2,R1\n");
    auto options = options_2024();
    options.schema = StockSchema::from_json(nlohmann::json{
        {"id", "ID"}, {"lat", "LAT"}, {"lon", "LON"}, {"area_sqft", "SQFT"},
        {"floors", "STORIES"}, {"year_built", "BUILT"}, {"occupancy", "OCC"},
        {"activity", "USE"}, {"structure", "S"}, {"foundation", "F"}, {"wall", "W"},
        {"roof", "R"}});
    const auto result = load_stock(in, options);
    ASSERT_EQ(result.buildings.size(), 1u);
    EXPECT_EQ(result.buildings[0].floors, 2);
}

TEST(LoadStock, CanonicalReExportIsByteIdentical) {
    std::ostringstream original;
    write_stock(original, synthetic_stock(50, 11, 2024));
    std::istringstream in(original.str());
    const auto loaded = load_stock(in, options_2024());
    std::ostringstream again;
    write_stock(again, loaded.buildings);
    EXPECT_EQ(again.str(), original.str());
}

TEST(Archetype, WoodExampleCode) {
    const auto code = derive_archetype(make('W', 'B', "W2", "R1"), CodeRegistry::defaults());
    EXPECT_EQ(code.str(), "WBW2R1");
}

TEST(Archetype, ParseRoundTrip) {
    const auto code = ArchetypeCode::parse("WBW2R1");
    EXPECT_EQ(code.structure, 'W');
    EXPECT_EQ(code.foundation, 'B');
    EXPECT_EQ(std::string(code.wall.begin(), code.wall.end()), "W2");
    EXPECT_EQ(std::string(code.roof.begin(), code.roof.end()), "R1");
    EXPECT_EQ(ArchetypeCode::parse(code.str()), code);
    EXPECT_THROW(ArchetypeCode::parse("WBW2R"), DataError);
}

TEST(Archetype, UnknownCodeNamesAttribute) {
    try {
        derive_archetype(make('W', 'Q', "W2", "R1"), CodeRegistry::defaults());
        FAIL();
    } catch (const UnknownCode& e) {
        EXPECT_EQ(e.attribute(), "foundation");
        EXPECT_EQ(e.value(), "Q");
    }
}

TEST(Archetype, DistinctTuplesGiveDistinctCodes) {
    auto in = fixture("stock_twenty.csv");
    const auto stock = load_stock(in, options_2024()).buildings;
    ASSERT_EQ(stock.size(), 20u);
    std::set<std::tuple<char, char, std::string, std::string>> tuples;
    std::set<std::string> codes;
    for (const auto& b : stock) {
        tuples.emplace(b.structure_type, b.foundation_type, b.wall_material, b.roof_material);
        codes.insert(derive_archetype(b, CodeRegistry::defaults()).str());
    }
    // Hand count of the fixture: 14 distinct tuples.
    EXPECT_EQ(tuples.size(), 14u);
    EXPECT_EQ(codes.size(), tuples.size());
}

TEST(Archetype, RegistryExtensionFromJson) {
    auto registry = CodeRegistry::defaults();
    registry.extend(CodeRegistry::from_json(nlohmann::json{{"structure", {{"T", "timber frame"}}}}));
    EXPECT_EQ(derive_archetype(make('T', 'B', "W2", "R1"), registry).str(), "TBW2R1");
    EXPECT_EQ(registry.label(CodeAttribute::Structure, "T"), "timber frame");
    EXPECT_THROW(CodeRegistry::from_json(nlohmann::json{{"wall", {{"W10", "x"}}}}), ConfigError);
}

TEST(AgeCategory, BoundaryCases) {
    EXPECT_EQ(classify_age(10, 20, 50), AgeCategory::New);
    EXPECT_EQ(classify_age(19, 20, 50), AgeCategory::New);
    EXPECT_EQ(classify_age(20, 20, 50), AgeCategory::MidRange);
    EXPECT_EQ(classify_age(50, 20, 50), AgeCategory::MidRange);
    EXPECT_EQ(classify_age(51, 20, 50), AgeCategory::Old);
    EXPECT_EQ(classify_age(60, 20, 50), AgeCategory::Old);
}

TEST(AgeCategory, FromBuildingAndReferenceYear) {
    Building b = make('W', 'B', "W2", "R1");
    b.year_built = 1964;
    EXPECT_EQ(classify_age(b, 2024, 20, 50), AgeCategory::Old);
    EXPECT_EQ(classify_age(b, 2024, 20, 60), AgeCategory::MidRange);
}

TEST(AgeCategory, InvalidThresholds) {
    EXPECT_THROW(classify_age(10, 50, 20), InvalidThresholds);
    EXPECT_THROW(classify_age(10, 0, 20), InvalidThresholds);
    EXPECT_THROW(classify_age(10, 20, 20), InvalidThresholds);
}

TEST(AgeCategory, PartitionsAnyStock) {
    const auto stock = synthetic_stock(500, 4, 2024);
    for (int lo : {5, 20, 40}) {
        for (int hi : {50, 60, 80}) {
            std::map<AgeCategory, std::size_t> counts;
            for (const auto& b : stock) ++counts[classify_age(b, 2024, lo, hi)];
            EXPECT_EQ(counts[AgeCategory::New] + counts[AgeCategory::MidRange] +
                          counts[AgeCategory::Old],
                      stock.size());
        }
    }
}

TEST(SampleStock, FullSampleIsPermutation) {
    const auto stock = synthetic_stock(40, 1, 2024);
    const auto sample = sample_stock(stock, stock.size(), 9);
    std::multiset<std::string> a, b;
    for (const auto& x : stock) a.insert(x.id);
    for (const auto& x : sample) b.insert(x.id);
    EXPECT_EQ(a, b);
}

TEST(SampleStock, DeterministicForSeed) {
    const auto stock = synthetic_stock(100, 1, 2024);
    const auto s1 = sample_stock(stock, 10, 77);
    const auto s2 = sample_stock(stock, 10, 77);
    ASSERT_EQ(s1.size(), 10u);
    for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_EQ(s1[i].id, s2[i].id);
    const auto s3 = sample_stock(stock, 10, 78);
    bool differs = false;
    for (std::size_t i = 0; i < s1.size(); ++i) differs |= s1[i].id != s3[i].id;
    EXPECT_TRUE(differs);
}

TEST(SampleStock, SingleDrawIsUniform) {
    const auto stock = synthetic_stock(4, 1, 2024);
    std::map<std::string, int> counts;
    constexpr int n = 10000;
    for (int seed = 0; seed < n; ++seed) ++counts[sample_stock(stock, 1, seed)[0].id];
    ASSERT_EQ(counts.size(), 4u);
    for (const auto& [id, c] : counts) EXPECT_NEAR(c / double(n), 0.25, 0.02) << id;
}

TEST(SampleStock, Errors) {
    const auto stock = synthetic_stock(50, 1, 2024);
    try {
        sample_stock(stock, 100, 1);
        FAIL();
    } catch (const SampleTooLarge& e) {
        EXPECT_NE(std::string(e.what()).find("sample exceeds stock"), std::string::npos);
    }
    EXPECT_THROW(sample_stock(stock, 0, 1), DataError);
}
