#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "nudgelab/domain/types.hpp"
#include "nudgelab/sim/api_client.hpp"
#include "nudgelab/sim/request_log.hpp"

namespace nudgelab {

// Synthetic participants. This behavior model is test scaffolding; nothing
// about it is fitted to real participants.
struct CohortConfig {
  int n_group1 = 10;  // V1 users
  int n_group2 = 12;  // V2 users
  int experiment_days = 7;
  double attempts_per_day_rate = 3.0;  // Poisson mean per user-day
  double edit_probability = 0.2;
  double change_after_edit_probability = 0.7;
  double abandon_probability = 0.05;
  std::uint64_t rng_seed = 1;
  std::string start_date = "2024-05-06";  // first local day of the experiment
  std::string time_zone = "UTC";          // should match the service policy
  int active_from_hour = 8;               // attempts fall in [from, until)
  int active_until_hour = 23;
  int max_edit_rounds = 3;  // after this many edits in a row the agent posts
  double duplication_rate = 0.0;  // fraction of writes resent as retries
  int threads = 1;
  std::string username_prefix = "sim";
  std::string password = "sim-password";

  // Throws Error(Validation).
  void validate() const;
};

CohortConfig cohort_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const CohortConfig& config);
CohortConfig load_cohort_config(const std::filesystem::path& path);

// Shadow count kept by an agent, independent of the store.
struct UserTally {
  std::string username;
  UserId user_id = 0;
  AppVariant app_variant = AppVariant::V1;
  int attempts = 0;       // share-attempt requests, retries excluded
  int interventions = 0;  // pop-ups shown
  int edits = 0;
  int posts = 0;
  int shares = 0;
  int abandoned = 0;
  int duplicates_sent = 0;
};

struct RunManifest {
  CohortConfig config;
  std::vector<UserTally> users;  // ascending user_id
  int users_created = 0;
  int events_emitted = 0;
  int requests_sent = 0;
  int duplicates_sent = 0;
};

nlohmann::json to_json(const RunManifest& manifest);

using ClientFactory = std::function<std::unique_ptr<ApiClient>()>;

// Registers the cohort and plays every user-day through the public API.
// With threads > 1 each worker gets its own client and a disjoint set of
// agents; agents themselves act sequentially. The server must run with the
// client clock for the simulated timeline to be honoured.
// Throws Error(Io) on an unreachable service or any non-2xx response,
// Error(Conflict) when a retry's response differs from the original's.
RunManifest run_cohort(const CohortConfig& config, const ClientFactory& clients,
                       RequestLog* log = nullptr);

// Single-threaded convenience; config.threads is ignored.
RunManifest run_cohort(const CohortConfig& config, ApiClient& client, RequestLog* log = nullptr);

}  // namespace nudgelab
