#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "scs/error.hpp"
#include "scs/workspace.hpp"

namespace scs {

// Error returned over HTTP as {"code", "message", "details"}.
class ApiError : public Error {
public:
    ApiError(int status, std::string code, std::string message,
             nlohmann::json details = nlohmann::json::object())
        : Error(std::move(code), std::move(message)), status_(status), details_(std::move(details)) {}

    int status() const { return status_; }
    const nlohmann::json& details() const { return details_; }

private:
    int status_;
    nlohmann::json details_;
};

struct ApiRequest {
    std::string method;  // GET, POST, PUT
    std::string path;    // "/api/..."
    std::map<std::string, std::string> query;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

// Transport-independent implementation of the HTTP API. Readers work on an
// immutable snapshot; segment writes and publications go through a single
// writer that persists before swapping the snapshot in.
class Service {
public:
    explicit Service(Workspace ws);  // loads the workspace, throws on invalid content

    ApiResponse handle(const ApiRequest& req);

    std::shared_ptr<const WorkspaceSnapshot> snapshot() const;
    void reload();
    const Workspace& workspace() const { return ws_; }

private:
    nlohmann::json dispatch(const ApiRequest& req, int& status);
    nlohmann::json write_segment(const std::string& corpus_id, const std::string* path_sid,
                                 const std::string& body, bool create_only, int& status);
    nlohmann::json publish(const std::string& scenario_id, const ApiRequest& req);
    void swap(std::shared_ptr<const WorkspaceSnapshot> next);

    Workspace ws_;
    mutable std::mutex snap_mu_;
    std::shared_ptr<const WorkspaceSnapshot> snap_;
    std::mutex write_mu_;
};

// HTTP status for a core error code raised while handling a request.
int status_for(const std::string& code);

nlohmann::json error_body(const std::string& code, const std::string& message,
                          const nlohmann::json& details = nlohmann::json::object());

// HTTP front end over a Service (cpp-httplib).
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    // Binds host:port (port 0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    void listen();  // blocks until stop()
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace scs
