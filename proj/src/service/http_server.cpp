#include "nudgelab/service/http_server.hpp"

#include <httplib.h>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {
namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

}  // namespace

HttpServer::HttpServer(Router& router)
    : router_(router), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    HttpReply reply = router_.dispatch(req.method, req.path, req.body);
    res.status = reply.status;
    res.set_content(reply.body, kJson);
  };
  server_->set_tcp_nodelay(true);
  // httplib's default also sets SO_REUSEPORT, which would let a second
  // instance share the port instead of failing to start.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  server_->Get(R"(/api/v1/.*)", handler);
  server_->Post(R"(/api/v1/.*)", handler);
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(error_body(ErrorCode::NotFound, "no such endpoint").dump(), kJson);
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host.c_str())
                        : (server_->bind_to_port(host.c_str(), port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::start() {
  worker_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  server_->stop();
  if (worker_.joinable()) worker_.join();
}

}  // namespace nudgelab
