#pragma once

#include <memory>
#include <string>
#include <thread>

#include "nudgelab/service/router.hpp"

namespace httplib {
class Server;
}

namespace nudgelab {

class HttpServer {
 public:
  explicit HttpServer(Router& router);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port (port 0 picks a free one) and returns the bound port.
  // Throws Error(Io) when the address is unavailable.
  int bind(const std::string& host, int port);

  // Serves on the calling thread until stop().
  void run();
  // Serves on a background thread.
  void start();
  void stop();

 private:
  Router& router_;
  std::unique_ptr<httplib::Server> server_;
  std::thread worker_;
};

}  // namespace nudgelab
