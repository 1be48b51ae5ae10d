#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace nudgelab {

enum class SelectionStrategy { UniformRandom };

struct PolicyConfig {
  int max_per_day = 5;
  int min_gap_minutes = 60;
  bool no_repeat_same_day = true;  // only meaningful for V2
  int token_ttl_minutes = 15;
  std::string day_boundary_timezone = "UTC";
  SelectionStrategy selection_strategy = SelectionStrategy::UniformRandom;
  std::optional<std::uint64_t> rng_seed;

  // Throws Error(Configuration) when a bound is violated or the time zone
  // is unknown.
  void validate() const;
};

// Keys: max_per_day, min_gap_minutes, no_repeat_same_day, token_ttl_minutes,
// day_boundary_timezone, selection_strategy ("uniform_random"), rng_seed.
// Missing keys keep their defaults; unknown keys are a configuration error.
PolicyConfig policy_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const PolicyConfig& config);
PolicyConfig load_policy(const std::filesystem::path& path);

}  // namespace nudgelab
