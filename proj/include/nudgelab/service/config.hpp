#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "nudgelab/service/service.hpp"

namespace nudgelab {

struct ServerConfig {
  std::string database = "nudgelab.db";
  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceConfig service;
};

// JSON keys: database, bind ("host:port"), server_secret, policy (inline
// object) or policy_file (path, relative to the config file),
// session_ttl_minutes, password_iterations, clock ("system" | "client"),
// require_corpus. Unknown keys are a configuration error.
ServerConfig server_config_from_json(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir = {});
ServerConfig load_server_config(const std::filesystem::path& path);

// NUDGELAB_DATABASE, NUDGELAB_BIND, NUDGELAB_SECRET, NUDGELAB_POLICY_FILE.
void apply_environment(ServerConfig& config);

// "host:port" -> (host, port). Throws Error(Configuration).
std::pair<std::string, int> parse_bind(const std::string& text);

}  // namespace nudgelab
