#include "nudgelab/engine/policy.hpp"

#include <fstream>
#include <set>

#include "nudgelab/domain/error.hpp"
#include "nudgelab/domain/time.hpp"

namespace nudgelab {

void PolicyConfig::validate() const {
  if (max_per_day < 1) throw Error(ErrorCode::Configuration, "max_per_day must be >= 1");
  if (min_gap_minutes < 0) throw Error(ErrorCode::Configuration, "min_gap_minutes must be >= 0");
  if (token_ttl_minutes < 1) {
    throw Error(ErrorCode::Configuration, "token_ttl_minutes must be >= 1");
  }
  DayCalendar probe(day_boundary_timezone);
}

PolicyConfig policy_from_json(const nlohmann::json& doc) {
  static const std::set<std::string> known = {
      "max_per_day",           "min_gap_minutes",    "no_repeat_same_day", "token_ttl_minutes",
      "day_boundary_timezone", "selection_strategy", "rng_seed"};
  if (!doc.is_object()) throw Error(ErrorCode::Configuration, "policy must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw Error(ErrorCode::Configuration, "unknown policy key: " + key);
  }

  PolicyConfig c;
  try {
    c.max_per_day = doc.value("max_per_day", c.max_per_day);
    c.min_gap_minutes = doc.value("min_gap_minutes", c.min_gap_minutes);
    c.no_repeat_same_day = doc.value("no_repeat_same_day", c.no_repeat_same_day);
    c.token_ttl_minutes = doc.value("token_ttl_minutes", c.token_ttl_minutes);
    c.day_boundary_timezone = doc.value("day_boundary_timezone", c.day_boundary_timezone);
    if (doc.contains("selection_strategy") &&
        doc.at("selection_strategy").get<std::string>() != "uniform_random") {
      throw Error(ErrorCode::Configuration, "unsupported selection_strategy");
    }
    if (doc.contains("rng_seed") && !doc.at("rng_seed").is_null()) {
      c.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Configuration, std::string("policy: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const PolicyConfig& c) {
  nlohmann::json j = {
      {"max_per_day", c.max_per_day},
      {"min_gap_minutes", c.min_gap_minutes},
      {"no_repeat_same_day", c.no_repeat_same_day},
      {"token_ttl_minutes", c.token_ttl_minutes},
      {"day_boundary_timezone", c.day_boundary_timezone},
      {"selection_strategy", "uniform_random"},
  };
  j["rng_seed"] = c.rng_seed ? nlohmann::json(*c.rng_seed) : nlohmann::json(nullptr);
  return j;
}

PolicyConfig load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open policy file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Configuration, path.string() + ": " + e.what());
  }
  return policy_from_json(doc);
}

}  // namespace nudgelab
