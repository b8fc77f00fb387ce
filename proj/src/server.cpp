#include <httplib.h>

#include "scs/api.hpp"

namespace scs {

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;

    explicit Impl(Service& s) : service(s) {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            ApiRequest api{req.method, req.path, {}, req.body};
            for (const auto& [k, v] : req.params) api.query.emplace(k, v);
            auto out = service.handle(api);
            res.status = out.status;
            res.set_content(out.body.dump(), "application/json");
        };
        server.Get(R"(/api/.*)", handler);
        server.Post(R"(/api/.*)", handler);
        server.Put(R"(/api/.*)", handler);
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (!res.body.empty()) return;
            res.set_content(error_body(res.status == 404 ? "NotFound" : "HttpError",
                                       httplib::status_message(res.status))
                                .dump(),
                            "application/json");
        });
    }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw Error("IoError", "cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port))
        throw Error("IoError", "cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace scs
