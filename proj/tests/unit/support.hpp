#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nudgelab/domain/corpus.hpp"
#include "nudgelab/domain/digest.hpp"
#include "nudgelab/domain/time.hpp"
#include "nudgelab/service/clock.hpp"
#include "nudgelab/service/router.hpp"
#include "nudgelab/service/service.hpp"
#include "nudgelab/sim/api_client.hpp"
#include "nudgelab/store/event_store.hpp"

namespace nudgelab::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(NUDGELAB_FIXTURE_DIR) / name;
}

inline nlohmann::json oracle() {
  static const nlohmann::json doc = [] {
    std::ifstream in(fixture("oracle_values.json"));
    return nlohmann::json::parse(in);
  }();
  return doc;
}

inline const std::vector<InterventionMessage>& shipped_corpus() {
  static const auto corpus =
      load_corpus(std::filesystem::path(NUDGELAB_DATA_DIR) / "corpus.tsv");
  return corpus;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("nudgelab-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline Timestamp at(const std::string& iso) { return *parse_iso8601(iso); }

inline ServiceConfig fast_config(std::uint64_t seed = 7) {
  ServiceConfig c;
  c.server_secret = "test-secret";
  c.password_iterations = 1000;
  c.policy.rng_seed = seed;
  return c;
}

inline EventStore& seeded(EventStore& store) {
  store.seed_corpus(shipped_corpus());
  return store;
}

// Store + service + router on a manual clock.
struct Rig {
  explicit Rig(ServiceConfig config = fast_config(), const std::string& db = ":memory:")
      : store(db),
        clock(std::make_shared<ManualClock>(at("2024-05-06T00:00:00Z"))),
        service(seeded(store), std::move(config), clock),
        router(service),
        client(router) {}

  EventStore store;
  std::shared_ptr<ManualClock> clock;
  Service service;
  Router router;
  InProcessClient client;

  // Registers and logs in; returns (user_id, session token).
  std::pair<UserId, std::string> user(const std::string& name, AppVariant v = AppVariant::V2) {
    auto reg = client.post("/api/v1/register", {{"username", name},
                                                {"password", "password-" + name},
                                                {"app_variant", to_string(v)},
                                                {"language", "EN"}});
    auto login = client.post("/api/v1/login", {{"username", name}, {"password", "password-" + name}});
    return {reg.body.at("user_id").get<UserId>(), login.body.at("session_token").get<std::string>()};
  }
};

inline std::string uuid_n(int n) {
  char buf[37];
  std::snprintf(buf, sizeof buf, "00000000-0000-4000-8000-%012d", n);
  return buf;
}

inline nlohmann::json content(const std::string& post_hash_seed, std::int64_t len = 10,
                              const std::string& image = "IMG_1.jpg") {
  return {{"post_length", len},
          {"post_hash", digest_content(1, post_hash_seed).hex()},
          {"image_hash", digest_content(1, image).hex()}};
}

}  // namespace nudgelab::testing
