#include "nudgelab/sim/api_client.hpp"

#include <httplib.h>

#include "nudgelab/domain/error.hpp"
#include "nudgelab/service/router.hpp"

namespace nudgelab {
namespace {

ApiResult to_result(const httplib::Result& res, std::string_view path, const std::string& base) {
  if (!res) {
    throw Error(ErrorCode::Io, "service unreachable at " + base + " (" + std::string(path) +
                                   "): " + httplib::to_string(res.error()));
  }
  ApiResult out{res->status, nlohmann::json::parse(res->body, nullptr, false)};
  if (out.body.is_discarded()) out.body = nlohmann::json{{"raw", res->body}};
  return out;
}

}  // namespace

HttpApiClient::HttpApiClient(const std::string& base_url)
    : base_url_(base_url), client_(std::make_unique<httplib::Client>(base_url)) {
  if (!client_->is_valid()) throw Error(ErrorCode::Configuration, "invalid endpoint " + base_url);
  client_->set_keep_alive(true);
  client_->set_tcp_nodelay(true);
  client_->set_connection_timeout(5);
  client_->set_read_timeout(30);
}

HttpApiClient::~HttpApiClient() = default;

ApiResult HttpApiClient::post(std::string_view path, const nlohmann::json& body) {
  std::string p(path);
  return to_result(client_->Post(p, body.dump(), "application/json; charset=utf-8"), path,
                   base_url_);
}

ApiResult HttpApiClient::get(std::string_view path) {
  std::string p(path);
  return to_result(client_->Get(p), path, base_url_);
}

ApiResult InProcessClient::post(std::string_view path, const nlohmann::json& body) {
  auto reply = router_.dispatch("POST", path, body.dump());
  return {reply.status, nlohmann::json::parse(reply.body)};
}

ApiResult InProcessClient::get(std::string_view path) {
  auto reply = router_.dispatch("GET", path, "");
  return {reply.status, nlohmann::json::parse(reply.body)};
}

}  // namespace nudgelab
