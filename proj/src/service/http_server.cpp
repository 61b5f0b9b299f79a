#include "assess/service/http_server.hpp"

#include <httplib.h>

#include <cctype>

namespace assess::service {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

HttpServer::HttpServer(AssessmentService& service, std::optional<std::string> static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api{req.method, req.path, {}, req.body};
    for (const auto& [name, value] : req.headers) api.headers[lower(name)] = value;
    const auto out = service_.handle(api);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  const std::string api_pattern = R"(/api/.*)";
  server_->Get(api_pattern, forward);
  server_->Post(api_pattern, forward);
  server_->Put(api_pattern, forward);
  server_->Delete(api_pattern, forward);
  if (static_dir) server_->set_mount_point("/", *static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace assess::service
