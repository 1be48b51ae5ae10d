#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nudgelab/sim/api_client.hpp"

namespace nudgelab {

// One API call made by the simulator, with the response it received.
struct LoggedRequest {
  std::string path;
  nlohmann::json body;
  std::string username;  // the agent that sent it
  ApiResult response;
  bool duplicate = false;  // a retry of the preceding entry
};

using RequestLog = std::vector<LoggedRequest>;

bool is_write_request(const LoggedRequest& r);

// Copy of `log` where a seeded fraction of share-attempt and resolve
// requests is immediately followed by an identical retry, the way a client
// on a flaky connection resends.
RequestLog inject_duplicates(const RequestLog& log, double duplication_rate, std::uint64_t seed);

struct ReplayResult {
  int requests = 0;
  int duplicates = 0;
  // Retries whose response differed from the response to the original.
  int mismatched_duplicates = 0;
};

// Re-sends a log against a fresh service. Session and intervention tokens
// are random per run, so they are remapped from the replay's own responses.
// Throws Error(Io) on any non-2xx response.
ReplayResult replay_log(const RequestLog& log, ApiClient& client);

nlohmann::json to_json(const RequestLog& log);
RequestLog request_log_from_json(const nlohmann::json& doc);

}  // namespace nudgelab
