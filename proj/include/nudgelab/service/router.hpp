#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "nudgelab/domain/error.hpp"
#include "nudgelab/service/service.hpp"

namespace nudgelab {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON document
};

int http_status(ErrorCode code);

// Maps the v1 wire protocol onto Service. Transport-free so the HTTP server
// and in-process clients share one code path.
//
//   POST /api/v1/register       GET /api/v1/health
//   POST /api/v1/login          POST /api/v1/share-attempt
//   POST /api/v1/logout         POST /api/v1/resolve
//
// Every response carries protocol_version; errors are
// {"protocol_version", "error_code", "message"}. Unknown request fields are
// rejected.
class Router {
 public:
  explicit Router(Service& service) : service_(service) {}

  HttpReply dispatch(std::string_view method, std::string_view path, std::string_view body);

 private:
  nlohmann::json handle(std::string_view method, std::string_view path,
                        const nlohmann::json& request);

  Service& service_;
};

nlohmann::json error_body(ErrorCode code, std::string_view message);

}  // namespace nudgelab
