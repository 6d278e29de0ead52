#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"
#include "ecosim/pipeline.hpp"
#include "helpers.hpp"

using namespace ecosim;
using ecosim::test::data_file;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.iterations = 120;
    c.seed = 5;
    c.workers = 2;
    c.reference_year = 2024;
    return c;
}

}  // namespace

TEST(LoadInputs, ReadsEveryFile) {
    const auto config = small_config();
    const auto inputs = load_inputs({data_file("stock_three.csv"), data_file("emissions_small.csv"),
                                     data_file("intensity_small.csv"), std::nullopt},
                                    config);
    EXPECT_EQ(inputs.stock.size(), 3u);
    EXPECT_EQ(inputs.emissions.size(), 3u);
    EXPECT_TRUE(inputs.diagnostics.empty());
}

TEST(LoadInputs, MissingFileIsADataError) {
    try {
        load_inputs({data_file("no_such_stock.csv"), data_file("emissions_small.csv")},
                    small_config());
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("cannot open stock"), std::string::npos);
    }
}

TEST(LoadInputs, SkipPolicyReportsRows) {
    auto config = small_config();
    config.row_policy = RowPolicy::Skip;
    const auto inputs =
        load_inputs({data_file("stock_ten_two_bad.csv"), data_file("emissions_small.csv")}, config);
    EXPECT_EQ(inputs.stock.size(), 8u);
    ASSERT_EQ(inputs.diagnostics.size(), 2u);
    EXPECT_EQ(inputs.diagnostics[0].row, 4u);
    EXPECT_EQ(inputs.diagnostics[1].row, 7u);
    config.row_policy = RowPolicy::Abort;
    EXPECT_THROW(
        load_inputs({data_file("stock_ten_two_bad.csv"), data_file("emissions_small.csv")}, config),
        DataError);
}

TEST(LoadInputs, DuplicateArchetypeRejected) {
    EXPECT_THROW(load_inputs({data_file("stock_three.csv"), data_file("emissions_duplicate.csv")},
                             small_config()),
                 DuplicateArchetype);
}

TEST(ExecuteRun, WritesArtifactsThatResummarizeIdentically) {
    const auto config = small_config();
    const auto inputs = load_inputs({data_file("stock_three.csv"), data_file("emissions_small.csv"),
                                     data_file("intensity_small.csv"), std::nullopt},
                                    config);
    const auto result = execute_run(inputs, config);
    EXPECT_EQ(result.outcomes.size(), 120u);
    EXPECT_EQ(result.stock_size, 3u);

    test::TempDir dir;
    write_artifacts(dir.path(), result);
    for (const char* f : {kOutcomesFile, kSummaryFile, kModelFile, kConfigFile}) {
        EXPECT_TRUE(std::filesystem::exists(dir.path() / f)) << f;
        EXPECT_FALSE(std::filesystem::exists(dir.path() / (std::string(f) + ".tmp"))) << f;
    }
    const auto again = resummarize(dir.path() / kOutcomesFile, config.dac);
    EXPECT_EQ(summary_text(again), read_file(dir.path() / kSummaryFile));

    const auto stored = RunConfig::from_json(nlohmann::json::parse(read_file(dir.path() / kConfigFile)));
    EXPECT_EQ(stored, config);
}

TEST(ExecuteRun, SampleSizeUsesSubset) {
    auto config = small_config();
    config.sample_size = 5;
    config.iterations = 10;
    const auto inputs =
        load_inputs({data_file("stock_twenty.csv"), data_file("emissions_small.csv")}, config);
    auto table_config = config;
    table_config.fallback = FallbackPolicy::GlobalMean;
    const auto result = execute_run(inputs, table_config);
    EXPECT_EQ(result.stock_size, 5u);
    EXPECT_EQ(result.summary.buildings, 5u);

    config.sample_size = 21;
    EXPECT_THROW(execute_run(inputs, config), SampleTooLarge);
}

TEST(ExecuteRun, WorkerCountDoesNotChangeBytes) {
    auto config = small_config();
    const auto inputs = load_inputs({data_file("stock_three.csv"), data_file("emissions_small.csv")},
                                    config);
    config.workers = 1;
    const auto one = outcomes_text(execute_run(inputs, config));
    config.workers = 3;
    EXPECT_EQ(outcomes_text(execute_run(inputs, config)), one);
}
