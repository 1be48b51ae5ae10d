#pragma once

#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

namespace httplib {
class Client;
}

namespace nudgelab {

class Router;

struct ApiResult {
  int status = 0;
  nlohmann::json body;

  bool ok() const { return status >= 200 && status < 300; }
};

class ApiClient {
 public:
  virtual ~ApiClient() = default;
  virtual ApiResult post(std::string_view path, const nlohmann::json& body) = 0;
  virtual ApiResult get(std::string_view path) = 0;
};

// Talks to a running service. Throws Error(Io) when the service cannot be
// reached.
class HttpApiClient final : public ApiClient {
 public:
  explicit HttpApiClient(const std::string& base_url);
  ~HttpApiClient() override;

  ApiResult post(std::string_view path, const nlohmann::json& body) override;
  ApiResult get(std::string_view path) override;

 private:
  std::string base_url_;
  std::unique_ptr<httplib::Client> client_;
};

// Same JSON protocol, no socket: requests go straight to a Router.
class InProcessClient final : public ApiClient {
 public:
  explicit InProcessClient(Router& router) : router_(router) {}

  ApiResult post(std::string_view path, const nlohmann::json& body) override;
  ApiResult get(std::string_view path) override;

 private:
  Router& router_;
};

}  // namespace nudgelab
