#include "nudgelab/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {

std::pair<std::string, int> parse_bind(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw Error(ErrorCode::Configuration, "bind must be host:port, got '" + text + "'");
  }
  int port = -1;
  auto digits = std::string_view(text).substr(colon + 1);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || p != digits.data() + digits.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::Configuration, "invalid port in bind '" + text + "'");
  }
  return {text.substr(0, colon), port};
}

ServerConfig server_config_from_json(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir) {
  static const std::set<std::string> known = {
      "database",           "bind",  "server_secret", "policy",        "policy_file",
      "session_ttl_minutes", "clock", "require_corpus", "password_iterations"};
  if (!doc.is_object()) throw Error(ErrorCode::Configuration, "config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::Configuration, "unknown config key: " + key);
  }

  ServerConfig c;
  try {
    c.database = doc.value("database", c.database);
    if (doc.contains("bind")) std::tie(c.host, c.port) = parse_bind(doc.at("bind").get<std::string>());
    c.service.server_secret = doc.value("server_secret", std::string());
    if (doc.contains("policy") && doc.contains("policy_file")) {
      throw Error(ErrorCode::Configuration, "give either policy or policy_file, not both");
    }
    if (doc.contains("policy")) c.service.policy = policy_from_json(doc.at("policy"));
    if (doc.contains("policy_file")) {
      std::filesystem::path p = doc.at("policy_file").get<std::string>();
      c.service.policy = load_policy(p.is_absolute() ? p : base_dir / p);
    }
    c.service.session_ttl_minutes = doc.value("session_ttl_minutes", c.service.session_ttl_minutes);
    c.service.password_iterations = doc.value("password_iterations", c.service.password_iterations);
    c.service.require_corpus = doc.value("require_corpus", c.service.require_corpus);
    auto clock = doc.value("clock", std::string("system"));
    if (clock == "system") {
      c.service.clock_mode = ClockMode::System;
    } else if (clock == "client") {
      c.service.clock_mode = ClockMode::Client;
    } else {
      throw Error(ErrorCode::Configuration, "clock must be \"system\" or \"client\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Configuration, std::string("config: ") + e.what());
  }
  return c;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Configuration, path.string() + ": " + e.what());
  }
  return server_config_from_json(doc, path.parent_path());
}

void apply_environment(ServerConfig& config) {
  if (const char* v = std::getenv("NUDGELAB_DATABASE")) config.database = v;
  if (const char* v = std::getenv("NUDGELAB_BIND")) std::tie(config.host, config.port) = parse_bind(v);
  if (const char* v = std::getenv("NUDGELAB_SECRET")) config.service.server_secret = v;
  if (const char* v = std::getenv("NUDGELAB_POLICY_FILE")) config.service.policy = load_policy(v);
}

}  // namespace nudgelab
