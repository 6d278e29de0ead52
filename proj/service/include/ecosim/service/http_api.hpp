#pragma once

#include <memory>
#include <string>

#include "ecosim/service/run_manager.hpp"

namespace httplib {
class Server;
}

namespace ecosim::service {

// HTTP front end over a RunManager. Routes:
//   POST   /api/runs                  {"city", "config"} -> 202 {"run_id", ...}
//   GET    /api/runs                  descriptors
//   GET    /api/runs/{id}             descriptor
//   GET    /api/runs/{id}/summary     summary.json
//   GET    /api/runs/{id}/outcomes.csv
//   GET    /api/runs/{id}/model       model.json
//   DELETE /api/runs/{id}             204, 404, or 409 while running
//   GET    /api/cities
//   GET    /api/defaults
//   PUT    /api/defaults/costs        merged cost table
//   PUT    /api/defaults/dac          {"usd_per_tonne": x}
// Errors carry {"errors": [{"field", "message"}]}.
class HttpApi {
public:
    explicit HttpApi(RunManager& runs);
    ~HttpApi();

    // Binds and returns the port (an ephemeral one when port == 0).
    int bind(const std::string& host, int port);
    // Serves until stop(). Call after bind().
    void listen();
    void stop();

private:
    RunManager& runs_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace ecosim::service
