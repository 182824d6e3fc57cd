#include "livingglobe/errors.hpp"
#include "livingglobe/globe_service.hpp"

#include <httplib.h>

namespace livingglobe {

struct GlobeServer::Impl
{
    httplib::Server server;
};

GlobeServer::GlobeServer(const ServiceConfig& config) : config_(config), impl_(std::make_unique<Impl>())
{
    config_.validate();
    auto dataset = std::make_shared<const Dataset>(read_bundle(config_.bundle_dir));
    api_ = std::make_unique<GlobeApi>(std::move(dataset), read_atlas(config_.resolved_atlas_dir()),
                                      config_.default_config);

    auto& svr = impl_->server;
    const std::string origin = config_.cors_origin;

    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        QueryParams query;
        for (const auto& [k, v] : req.params)
            query.emplace(k, v);
        ApiResponse out = api_->handle(req.path, query);
        res.status = out.status;
        res.set_content(std::move(out.body), out.content_type);
    };
    svr.Get(R"(/api/.*)", forward);
    svr.Get(R"(/assets/.*)", forward);
    svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    svr.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    if (config_.static_dir && !svr.set_mount_point("/", config_.static_dir->string()))
        throw IoError("cannot serve static files from " + config_.static_dir->string());
}

GlobeServer::~GlobeServer()
{
    stop();
}

int GlobeServer::bind()
{
    if (!impl_->server.bind_to_port(config_.host, config_.port))
        throw IoError("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    return config_.port;
}

int GlobeServer::bind_any_port()
{
    const int port = impl_->server.bind_to_any_port(config_.host);
    if (port < 0)
        throw IoError("cannot bind an ephemeral port on " + config_.host);
    return port;
}

void GlobeServer::listen()
{
    if (!impl_->server.listen_after_bind())
        throw IoError("server stopped with an error");
}

void GlobeServer::stop()
{
    if (impl_ && impl_->server.is_running())
        impl_->server.stop();
}

} // namespace livingglobe
