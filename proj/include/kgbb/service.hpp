#pragma once
// REST front end over one engine. Routing and handlers are plain functions
// of a request so they can be exercised without a socket; serve() binds
// them to an HTTP server.

#include "kgbb/engine.hpp"
#include "kgbb/error.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>

namespace kgbb {

struct HttpRequest {
    std::string method;
    // Raw request target: percent-encoded path plus optional query.
    std::string target;
    // Lower-cased header names.
    std::map<std::string, std::string> headers;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

struct ServiceConfig {
    std::filesystem::path spec;
    // Tables-bundle directory; loaded at start, rewritten after each mutation.
    std::optional<std::filesystem::path> store;
    std::string host = "127.0.0.1";
    int port = 8080;
};

// KGBB_SPEC, KGBB_STORE, KGBB_PORT.
ServiceConfig config_from_env();

class Service {
public:
    Service(std::shared_ptr<const Specification> spec, std::optional<std::filesystem::path> store_dir = std::nullopt,
            EngineOptions options = {});

    HttpResponse handle(const HttpRequest& req);

    Engine& engine() { return engine_; }

private:
    void persist();

    std::optional<std::filesystem::path> store_dir_;
    Engine engine_;
    std::mutex persist_mutex_;
};

int status_for(ErrorCode code);

// Blocks until the server stops. Returns nonzero when the spec fails to
// load or validate (diagnostics go to `log`).
int serve(const ServiceConfig& config, std::ostream& log);

} // namespace kgbb
