#pragma once

#include <memory>
#include <optional>
#include <string>

#include "assess/service/service.hpp"

namespace httplib {
class Server;
}

namespace assess::service {

/// Binds the AssessmentService to an HTTP listener.
class HttpServer {
 public:
  explicit HttpServer(AssessmentService& service, std::optional<std::string> static_dir = std::nullopt);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  AssessmentService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace assess::service
