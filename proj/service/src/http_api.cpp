#include "ecosim/service/http_api.hpp"

#include <fstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ecosim/error.hpp"
#include "ecosim/pipeline.hpp"

namespace ecosim::service {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", kJson);
}

void send_errors(httplib::Response& res, int status, const std::vector<FieldError>& errors) {
    json list = json::array();
    for (const auto& e : errors) list.push_back({{"field", e.field}, {"message", e.message}});
    send_json(res, status, {{"errors", list}});
}

void send_error(httplib::Response& res, int status, std::string field, std::string message) {
    send_errors(res, status, {{std::move(field), std::move(message)}});
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        send_error(res, 400, "body", std::string("invalid JSON: ") + e.what());
        return std::nullopt;
    }
}

}  // namespace

HttpApi::HttpApi(RunManager& runs) : runs_(runs), server_(std::make_unique<httplib::Server>()) {
    auto& s = *server_;

    s.Post("/api/runs", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req, res);
        if (!body) return;
        try {
            const RunDescriptor d = runs_.submit(*body);
            res.set_header("Location", "/api/runs/" + d.run_id);
            send_json(res, 202, d.to_json());
        } catch (const ConfigError& e) {
            send_errors(res, 400, e.errors());
        } catch (const std::exception& e) {
            send_error(res, 503, "service", e.what());
        }
    });

    s.Get("/api/runs", [this](const httplib::Request&, httplib::Response& res) {
        json list = json::array();
        for (const auto& d : runs_.list()) list.push_back(d.to_json());
        send_json(res, 200, list);
    });

    s.Get(R"(/api/runs/([0-9A-Za-z_-]+))", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
        const auto d = runs_.get(req.matches[1]);
        if (!d) return send_error(res, 404, "run_id", "unknown run");
        send_json(res, 200, d->to_json());
    });

    auto artifact = [this](const char* file, const char* content_type) {
        return [this, file, content_type](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            const auto d = runs_.get(id);
            if (!d) return send_error(res, 404, "run_id", "unknown run");
            if (d->state != RunState::Completed) {
                return send_error(res, 409, "state",
                                  "run is " + std::string(to_string(d->state)));
            }
            const auto path = runs_.artifact(id, file);
            auto in = path ? std::make_shared<std::ifstream>(*path, std::ios::binary) : nullptr;
            if (!in || !*in) return send_error(res, 404, "run_id", "artifact missing");
            res.status = 200;
            res.set_chunked_content_provider(
                content_type, [in](std::size_t, httplib::DataSink& sink) {
                    char buffer[1 << 14];
                    in->read(buffer, sizeof buffer);
                    const auto got = in->gcount();
                    if (got > 0) sink.write(buffer, static_cast<std::size_t>(got));
                    if (!*in) sink.done();
                    return true;
                });
        };
    };
    s.Get(R"(/api/runs/([0-9A-Za-z_-]+)/summary)", artifact(kSummaryFile, kJson));
    s.Get(R"(/api/runs/([0-9A-Za-z_-]+)/model)", artifact(kModelFile, kJson));
    s.Get(R"(/api/runs/([0-9A-Za-z_-]+)/outcomes\.csv)", artifact(kOutcomesFile, "text/csv"));

    s.Delete(R"(/api/runs/([0-9A-Za-z_-]+))", [this](const httplib::Request& req,
                                                     httplib::Response& res) {
        switch (runs_.remove(req.matches[1])) {
            case RunManager::RemoveResult::Removed: res.status = 204; return;
            case RunManager::RemoveResult::NotFound:
                return send_error(res, 404, "run_id", "unknown run");
            case RunManager::RemoveResult::Running:
                return send_error(res, 409, "state", "run is running");
        }
    });

    s.Get("/api/cities", [this](const httplib::Request&, httplib::Response& res) {
        json list = json::array();
        for (const auto& name : runs_.cities()) list.push_back({{"name", name}});
        send_json(res, 200, list);
    });

    s.Get("/api/defaults", [this](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200,
                  {{"costs", runs_.default_costs().to_json()},
                   {"dac", {{"usd_per_tonne", runs_.default_dac().usd_per_tonne}}}});
    });

    s.Put("/api/defaults/costs", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req, res);
        if (!body) return;
        try {
            send_json(res, 200, runs_.update_costs(*body).to_json());
        } catch (const ConfigError& e) {
            send_errors(res, 400, e.errors());
        }
    });

    s.Put("/api/defaults/dac", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req, res);
        if (!body) return;
        try {
            send_json(res, 200, {{"usd_per_tonne", runs_.update_dac(*body).usd_per_tonne}});
        } catch (const ConfigError& e) {
            send_errors(res, 400, e.errors());
        }
    });

    s.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            send_error(res, 500, "server", e.what());
        } catch (...) {
            send_error(res, 500, "server", "unknown error");
        }
    });
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

void HttpApi::listen() { server_->listen_after_bind(); }

void HttpApi::stop() {
    if (server_) server_->stop();
}

}  // namespace ecosim::service
