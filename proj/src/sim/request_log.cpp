#include "nudgelab/sim/request_log.hpp"

#include <map>
#include <random>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {

bool is_write_request(const LoggedRequest& r) {
  return r.path == "/api/v1/share-attempt" || r.path == "/api/v1/resolve";
}

RequestLog inject_duplicates(const RequestLog& log, double duplication_rate, std::uint64_t seed) {
  if (duplication_rate < 0.0 || duplication_rate > 1.0) {
    throw Error(ErrorCode::Validation, "duplication_rate must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution retry(duplication_rate);
  RequestLog out;
  out.reserve(log.size());
  for (const auto& entry : log) {
    out.push_back(entry);
    if (!entry.duplicate && is_write_request(entry) && retry(rng)) {
      LoggedRequest copy = entry;
      copy.duplicate = true;
      out.push_back(std::move(copy));
    }
  }
  return out;
}

ReplayResult replay_log(const RequestLog& log, ApiClient& client) {
  ReplayResult result;
  std::map<std::string, std::string> sessions;
  std::map<std::string, std::string> tokens;
  nlohmann::json last_response;

  for (const auto& entry : log) {
    nlohmann::json body = entry.body;
    if (body.contains("session_token")) {
      auto it = sessions.find(entry.username);
      if (it == sessions.end()) {
        throw Error(ErrorCode::Validation, "replay: no session for " + entry.username);
      }
      body["session_token"] = it->second;
    }
    if (body.contains("intervention_token")) {
      auto it = tokens.find(body["intervention_token"].get<std::string>());
      if (it == tokens.end()) throw Error(ErrorCode::Validation, "replay: unknown token");
      body["intervention_token"] = it->second;
    }

    ApiResult res = client.post(entry.path, body);
    ++result.requests;
    if (!res.ok()) {
      throw Error(ErrorCode::Io, "replay: " + entry.path + " returned " +
                                     std::to_string(res.status) + ": " + res.body.dump());
    }

    if (entry.duplicate) {
      ++result.duplicates;
      if (res.body != last_response) ++result.mismatched_duplicates;
      continue;
    }
    last_response = res.body;
    if (entry.path == "/api/v1/login") {
      sessions[entry.username] = res.body.at("session_token").get<std::string>();
    }
    if (entry.path == "/api/v1/share-attempt" && entry.response.body.contains("intervention_token") &&
        res.body.contains("intervention_token")) {
      tokens[entry.response.body.at("intervention_token").get<std::string>()] =
          res.body.at("intervention_token").get<std::string>();
    }
  }
  return result;
}

nlohmann::json to_json(const RequestLog& log) {
  auto arr = nlohmann::json::array();
  for (const auto& e : log) {
    arr.push_back({{"path", e.path},
                   {"body", e.body},
                   {"username", e.username},
                   {"status", e.response.status},
                   {"response", e.response.body},
                   {"duplicate", e.duplicate}});
  }
  return arr;
}

RequestLog request_log_from_json(const nlohmann::json& doc) {
  RequestLog out;
  try {
    for (const auto& e : doc) {
      out.push_back({e.at("path").get<std::string>(), e.at("body"),
                     e.at("username").get<std::string>(),
                     {e.at("status").get<int>(), e.at("response")},
                     e.value("duplicate", false)});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::Validation, std::string("request log: ") + ex.what());
  }
  return out;
}

}  // namespace nudgelab
