#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"
#include "ecosim/pipeline.hpp"
#include "ecosim/service/http_api.hpp"
#include "ecosim/service/run_manager.hpp"
#include "ecosim/synthetic.hpp"
#include "helpers.hpp"

using namespace ecosim;
using namespace ecosim::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void make_city(const fs::path& data_dir, const std::string& name, std::size_t buildings) {
    const fs::path dir = data_dir / "cities" / name;
    fs::create_directories(dir);
    const auto stock = synthetic_stock(buildings, 1, 2024);
    std::ofstream s(dir / "stock.csv");
    write_stock(s, stock);
    std::ofstream e(dir / "emissions.csv");
    write_emission_table(e, synthetic_emission_table(1));
}

class ServiceTest : public ::testing::Test {
protected:
    void SetUp() override {
        make_city(dir.path(), "sample", 40);
        manager = std::make_unique<RunManager>(dir.path(), 1);
        api = std::make_unique<HttpApi>(*manager);
        port = api->bind("127.0.0.1", 0);
        server = std::thread([this] { api->listen(); });
        client = std::make_unique<httplib::Client>("127.0.0.1", port);
        client->set_read_timeout(30, 0);
    }

    void TearDown() override {
        api->stop();
        server.join();
        manager->shutdown();
    }

    httplib::Result post_run(const json& body) {
        return client->Post("/api/runs", body.dump(), "application/json");
    }

    std::string submit_and_wait(const json& config) {
        auto res = post_run({{"city", "sample"}, {"config", config}});
        EXPECT_EQ(res->status, 202) << res->body;
        const std::string id = json::parse(res->body)["run_id"];
        EXPECT_EQ(res->get_header_value("Location"), "/api/runs/" + id);
        EXPECT_TRUE(manager->wait(id, std::chrono::seconds(60)));
        return id;
    }

    test::TempDir dir;
    std::unique_ptr<RunManager> manager;
    std::unique_ptr<HttpApi> api;
    int port = 0;
    std::thread server;
    std::unique_ptr<httplib::Client> client;
};

}  // namespace

TEST_F(ServiceTest, SubmitPollFetch) {
    const auto id = submit_and_wait({{"iterations", 150}, {"seed", 3}});
    auto res = client->Get("/api/runs/" + id);
    ASSERT_EQ(res->status, 200);
    const auto d = json::parse(res->body);
    EXPECT_EQ(d["state"], "completed");
    EXPECT_EQ(d["progress"], 1.0);
    EXPECT_EQ(d["results"]["summary"], "/api/runs/" + id + "/summary");

    auto summary = client->Get("/api/runs/" + id + "/summary");
    ASSERT_EQ(summary->status, 200);
    auto outcomes = client->Get("/api/runs/" + id + "/outcomes.csv");
    ASSERT_EQ(outcomes->status, 200);
    auto model = client->Get("/api/runs/" + id + "/model");
    ASSERT_EQ(model->status, 200);
    EXPECT_EQ(json::parse(model->body)["target"], "total_emissions");

    test::TempDir scratch;
    write_file_atomic(scratch.path() / "outcomes.csv", outcomes->body);
    EXPECT_EQ(summary_text(resummarize(scratch.path() / "outcomes.csv", DacPricing{})),
              summary->body);

    auto list = client->Get("/api/runs");
    ASSERT_EQ(list->status, 200);
    EXPECT_EQ(json::parse(list->body).size(), 1u);

    auto del = client->Delete("/api/runs/" + id);
    EXPECT_EQ(del->status, 204);
    EXPECT_EQ(client->Get("/api/runs/" + id)->status, 404);
}

TEST_F(ServiceTest, SingleIterationScenariosCoincide) {
    const auto id = submit_and_wait({{"iterations", 1}});
    const auto s = json::parse(client->Get("/api/runs/" + id + "/summary")->body);
    EXPECT_EQ(s["scenarios"]["optimistic"], s["scenarios"]["probable"]);
    EXPECT_EQ(s["scenarios"]["probable"], s["scenarios"]["pessimistic"]);
    const auto model = json::parse(client->Get("/api/runs/" + id + "/model")->body);
    EXPECT_EQ(model["status"], "ok");
    EXPECT_EQ(model["columns"], json::array({"intercept"}));
}

TEST_F(ServiceTest, UnknownRunIs404) {
    EXPECT_EQ(client->Get("/api/runs/ffffffffffffffff")->status, 404);
    EXPECT_EQ(client->Get("/api/runs/ffffffffffffffff/summary")->status, 404);
    EXPECT_EQ(client->Delete("/api/runs/ffffffffffffffff")->status, 404);
}

TEST_F(ServiceTest, InvalidSubmissionsAre400WithFields) {
    auto res = post_run({{"city", "atlantis"}, {"config", {{"iterations", 0}}}});
    ASSERT_EQ(res->status, 400);
    const auto errors = json::parse(res->body)["errors"];
    std::set<std::string> fields;
    for (const auto& e : errors) fields.insert(e["field"].get<std::string>());
    EXPECT_TRUE(fields.count("city"));
    EXPECT_TRUE(fields.count("iterations"));

    auto bad_json = client->Post("/api/runs", "{not json", "application/json");
    EXPECT_EQ(bad_json->status, 400);
    EXPECT_TRUE(manager->list().empty());
}

TEST_F(ServiceTest, UnfinishedRunsAre409) {
    auto slow = post_run({{"city", "sample"}, {"config", {{"iterations", 5000000}}}});
    ASSERT_EQ(slow->status, 202);
    auto queued = post_run({{"city", "sample"}, {"config", {{"iterations", 10}}}});
    ASSERT_EQ(queued->status, 202);
    const std::string slow_id = json::parse(slow->body)["run_id"];
    const std::string queued_id = json::parse(queued->body)["run_id"];

    EXPECT_EQ(client->Get("/api/runs/" + queued_id + "/summary")->status, 409);
    EXPECT_EQ(client->Get("/api/runs/" + queued_id + "/outcomes.csv")->status, 409);
    for (int i = 0; i < 500 && manager->get(slow_id)->state != RunState::Running; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ASSERT_EQ(manager->get(slow_id)->state, RunState::Running);
    EXPECT_EQ(client->Delete("/api/runs/" + slow_id)->status, 409);
}

TEST_F(ServiceTest, CitiesAndDefaults) {
    make_city(dir.path(), "second", 5);
    fs::create_directories(dir.path() / "cities" / "incomplete");
    const auto cities = json::parse(client->Get("/api/cities")->body);
    ASSERT_EQ(cities.size(), 2u);

    auto costs = client->Put("/api/defaults/costs", json{{"commercial_renovation", 460}}.dump(),
                             "application/json");
    ASSERT_EQ(costs->status, 200);
    EXPECT_EQ(json::parse(costs->body)["commercial_renovation"], 460.0);
    EXPECT_EQ(json::parse(costs->body)["commercial_new_construction"], 562.0);

    auto bad = client->Put("/api/defaults/costs", json{{"commercial_renovation", -1}}.dump(),
                           "application/json");
    EXPECT_EQ(bad->status, 400);

    auto dac = client->Put("/api/defaults/dac", json{{"usd_per_tonne", 300}}.dump(),
                           "application/json");
    ASSERT_EQ(dac->status, 200);
    EXPECT_EQ(json::parse(dac->body)["usd_per_tonne"], 300.0);
    EXPECT_EQ(client->Put("/api/defaults/dac", "0", "application/json")->status, 400);

    const auto defaults = json::parse(client->Get("/api/defaults")->body);
    EXPECT_EQ(defaults["costs"]["commercial_renovation"], 460.0);

    const auto id = submit_and_wait({{"iterations", 2}});
    const auto d = manager->get(id);
    EXPECT_EQ(d->config["costs"]["commercial_renovation"], 460.0);
    EXPECT_EQ(d->config["dac_price"], 300.0);
}

TEST(RunManagerRestart, UnfinishedRunsBecomeInterrupted) {
    test::TempDir dir;
    make_city(dir.path(), "sample", 10);
    std::string id;
    {
        RunManager m(dir.path(), 1);
        m.update_dac(json{{"usd_per_tonne", 250}});
        id = m.submit({{"city", "sample"}, {"config", {{"iterations", 5000000}}}}).run_id;
    }
    RunManager again(dir.path(), 1);
    const auto d = again.get(id);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->state, RunState::Failed);
    EXPECT_EQ(d->reason, "interrupted");
    EXPECT_EQ(again.default_dac().usd_per_tonne, 250.0);
}

TEST(RunManagerRestart, DescriptorRoundTrip) {
    RunDescriptor d;
    d.run_id = "0123456789abcdef";
    d.city = "sample";
    d.state = RunState::Failed;
    d.reason = "interrupted";
    d.progress = 0.25;
    d.results["summary"] = "/api/runs/0123456789abcdef/summary";
    const auto back = RunDescriptor::from_json(d.to_json());
    EXPECT_EQ(back.to_json(), d.to_json());
    EXPECT_EQ(parse_run_state("completed"), RunState::Completed);
    EXPECT_FALSE(parse_run_state("exploded").has_value());
}
