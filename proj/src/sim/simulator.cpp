#include "nudgelab/sim/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include <absl/time/civil_time.h>

#include "nudgelab/domain/digest.hpp"
#include "nudgelab/domain/error.hpp"
#include "nudgelab/domain/time.hpp"

namespace nudgelab {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;

constexpr const char* kWords[] = {
    "sunset",  "coffee",   "weekend", "friends", "beach",   "mountain", "city",    "lunch",
    "concert", "birthday", "garden",  "river",   "train",   "morning",  "library", "bike",
    "rain",    "festival", "dinner",  "puppy",   "cat",     "market",   "museum",  "sky",
    "road",    "trip",     "home",    "family",  "work",    "study",    "game",    "match",
    "snow",    "lake",     "forest",  "bridge",  "street",  "pizza",    "cake",    "party",
    "night",   "light",    "music",   "dance",   "run",     "gym",      "book",    "film",
    "new",     "best",     "finally", "again",   "today",   "love",     "with",    "my",
    "the",     "at",       "in",      "our"};
constexpr std::size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);

// Independent streams per agent so that, e.g., retries do not shift the
// behavior draws.
enum Stream : std::uint64_t { kBehavior = 1, kIds = 2, kRetries = 3 };

std::mt19937_64 stream(std::uint64_t seed, int agent, Stream s) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(agent), static_cast<std::uint32_t>(s)};
  return std::mt19937_64(seq);
}

std::string seeded_uuid(std::mt19937_64& rng) {
  unsigned char b[16];
  for (int i = 0; i < 16; i += 8) {
    std::uint64_t v = rng();
    for (int j = 0; j < 8; ++j) b[i + j] = static_cast<unsigned char>(v >> (8 * j));
  }
  b[6] = static_cast<unsigned char>((b[6] & 0x0f) | 0x40);
  b[8] = static_cast<unsigned char>((b[8] & 0x3f) | 0x80);
  char out[37];
  std::snprintf(out, sizeof out,
                "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x", b[0], b[1],
                b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11], b[12], b[13], b[14],
                b[15]);
  return out;
}

struct Content {
  std::string caption;
  std::string image;
};

Content compose(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> words(0, 12);
  std::uniform_int_distribution<std::size_t> pick(0, kWordCount - 1);
  Content c;
  int n = words(rng);
  for (int i = 0; i < n; ++i) {
    if (i) c.caption += ' ';
    c.caption += kWords[pick(rng)];
  }
  c.image = "IMG_" + std::to_string(std::uniform_int_distribution<int>(1000, 9999)(rng)) + ".jpg";
  return c;
}

void add_content(json& body, UserId user, const Content& c) {
  body["post_length"] = static_cast<std::int64_t>(c.caption.size());
  body["post_hash"] = digest_content(user, c.caption).hex();
  body["image_hash"] = digest_content(user, c.image).hex();
}

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

struct Agent {
  int index = 0;
  std::string username;
  AppVariant variant = AppVariant::V1;
  Language language = Language::EN;
  UserTally tally;
  RequestLog log;
};

class AgentRun {
 public:
  AgentRun(const CohortConfig& cfg, Agent& agent, ApiClient& client, bool keep_log)
      : cfg_(cfg),
        agent_(agent),
        client_(client),
        keep_log_(keep_log),
        behavior_(stream(cfg.rng_seed, agent.index, kBehavior)),
        ids_(stream(cfg.rng_seed, agent.index, kIds)),
        retries_(stream(cfg.rng_seed, agent.index, kRetries)),
        retry_(cfg.duplication_rate),
        zone_() {
    if (!absl::LoadTimeZone(cfg.time_zone, &zone_)) {
      throw Error(ErrorCode::Configuration, "unknown time zone " + cfg.time_zone);
    }
  }

  int requests() const { return requests_; }

  void play(absl::CivilDay first_day) {
    std::uniform_int_distribution<int> minute(cfg_.active_from_hour * 60,
                                              cfg_.active_until_hour * 60 - 1);
    std::uniform_int_distribution<int> second(0, 59);
    for (int d = 0; d < cfg_.experiment_days; ++d) {
      absl::CivilDay day = first_day + d;
      Timestamp day_end = local(day + 1, 0, 0);
      // A fresh session each morning; sessions outlive a day at most.
      json login = {{"username", agent_.username},
                    {"password", cfg_.password},
                    {"client_timestamp", format_iso8601(local(day, 0, 0))}};
      session_ = send("/api/v1/login", login).at("session_token").get<std::string>();
      int n = 0;
      if (cfg_.attempts_per_day_rate > 0) {
        n = std::poisson_distribution<int>(cfg_.attempts_per_day_rate)(behavior_);
      }
      std::vector<Timestamp> planned;
      for (int i = 0; i < n; ++i) {
        int m = minute(behavior_);
        planned.push_back(local(day, m / 60, m % 60) + std::chrono::seconds(second(behavior_)));
      }
      std::sort(planned.begin(), planned.end());
      for (Timestamp t : planned) {
        t = std::max(t, cursor_ + 1s);
        if (t >= day_end) break;
        attempt_chain(t, day_end);
      }
    }
  }

 private:
  Timestamp local(absl::CivilDay day, int hour, int minute) const {
    absl::CivilMinute cm(day.year(), day.month(), day.day(), hour, minute);
    return from_epoch_ms(absl::ToUnixMillis(absl::FromCivil(cm, zone_)));
  }

  // Compose, attempt, and follow the pop-up until the content is shared,
  // posted, abandoned, or the day runs out.
  void attempt_chain(Timestamp t, Timestamp day_end) {
    Content content = compose(behavior_);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> rethink(1, 10);
    int edit_rounds = 0;
    while (true) {
      cursor_ = t;
      json share = {{"session_token", session_},
                    {"client_event_id", seeded_uuid(ids_)},
                    {"client_timestamp", format_iso8601(t)}};
      add_content(share, agent_.tally.user_id, content);
      ++agent_.tally.attempts;
      json res = send("/api/v1/share-attempt", share);
      if (res.at("decision") == "pass") {
        ++agent_.tally.shares;
        return;
      }
      ++agent_.tally.interventions;
      if (u(behavior_) < cfg_.abandon_probability) {
        ++agent_.tally.abandoned;
        return;
      }
      bool edit = u(behavior_) < cfg_.edit_probability && edit_rounds < cfg_.max_edit_rounds;
      // Zero latency: the pop-up is answered at the instant it appears, so
      // the resolution timestamp equals the issuance time.
      json resolve = {{"session_token", session_},
                      {"client_event_id", seeded_uuid(ids_)},
                      {"intervention_token", res.at("intervention_token")},
                      {"action", edit ? "edit" : "post"},
                      {"client_timestamp", format_iso8601(t)}};
      add_content(resolve, agent_.tally.user_id, content);
      send("/api/v1/resolve", resolve);
      if (!edit) {
        ++agent_.tally.posts;
        return;
      }
      ++agent_.tally.edits;
      ++edit_rounds;
      if (u(behavior_) < cfg_.change_after_edit_probability) content = compose(behavior_);
      t += std::chrono::minutes(rethink(behavior_));
      if (t >= day_end) return;
    }
  }

  json send(const std::string& path, const json& body) {
    ApiResult res = client_.post(path, body);
    ++requests_;
    if (keep_log_) agent_.log.push_back({path, body, agent_.username, res, false});
    if (!res.ok()) {
      throw Error(ErrorCode::Io, agent_.username + ": " + path + " " + body.dump() + " -> " +
                                     std::to_string(res.status) + " " + res.body.dump());
    }
    bool write = path == "/api/v1/share-attempt" || path == "/api/v1/resolve";
    if (write && cfg_.duplication_rate > 0 && retry_(retries_)) {
      ApiResult again = client_.post(path, body);
      ++requests_;
      ++agent_.tally.duplicates_sent;
      if (keep_log_) agent_.log.push_back({path, body, agent_.username, again, true});
      if (again.status != res.status || again.body != res.body) {
        throw Error(ErrorCode::Conflict, agent_.username + ": retry of " + path +
                                             " answered " + again.body.dump() + " instead of " +
                                             res.body.dump());
      }
    }
    return res.body;
  }

  const CohortConfig& cfg_;
  Agent& agent_;
  ApiClient& client_;
  bool keep_log_;
  std::mt19937_64 behavior_;
  std::mt19937_64 ids_;
  std::mt19937_64 retries_;
  std::bernoulli_distribution retry_;
  absl::TimeZone zone_;
  std::string session_;
  Timestamp cursor_{};
  int requests_ = 0;
};

absl::CivilDay parse_day(const std::string& text) {
  absl::CivilDay day;
  if (!absl::ParseCivilTime(text, &day)) {
    throw Error(ErrorCode::Validation, "start_date must be YYYY-MM-DD, got " + text);
  }
  return day;
}

}  // namespace

void CohortConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::Validation, what); };
  if (n_group1 < 0 || n_group2 < 0) fail("group sizes must be >= 0");
  if (experiment_days < 1) fail("experiment_days must be >= 1");
  if (!(attempts_per_day_rate >= 0)) fail("attempts_per_day_rate must be >= 0");
  if (!in_unit(edit_probability)) fail("edit_probability must lie in [0, 1]");
  if (!in_unit(change_after_edit_probability)) {
    fail("change_after_edit_probability must lie in [0, 1]");
  }
  if (!in_unit(abandon_probability)) fail("abandon_probability must lie in [0, 1]");
  if (!in_unit(duplication_rate)) fail("duplication_rate must lie in [0, 1]");
  if (active_from_hour < 0 || active_until_hour > 24 || active_from_hour >= active_until_hour) {
    fail("active hours must satisfy 0 <= from < until <= 24");
  }
  if (max_edit_rounds < 0) fail("max_edit_rounds must be >= 0");
  if (threads < 1) fail("threads must be >= 1");
  if (username_prefix.empty()) fail("username_prefix must not be empty");
  parse_day(start_date);
}

CohortConfig cohort_config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Validation, "cohort config must be an object");
  CohortConfig c;
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "n_group1") c.n_group1 = v.get<int>();
      else if (key == "n_group2") c.n_group2 = v.get<int>();
      else if (key == "experiment_days") c.experiment_days = v.get<int>();
      else if (key == "attempts_per_day_rate") c.attempts_per_day_rate = v.get<double>();
      else if (key == "edit_probability") c.edit_probability = v.get<double>();
      else if (key == "change_after_edit_probability") c.change_after_edit_probability = v.get<double>();
      else if (key == "abandon_probability") c.abandon_probability = v.get<double>();
      else if (key == "rng_seed") c.rng_seed = v.get<std::uint64_t>();
      else if (key == "start_date") c.start_date = v.get<std::string>();
      else if (key == "time_zone") c.time_zone = v.get<std::string>();
      else if (key == "active_from_hour") c.active_from_hour = v.get<int>();
      else if (key == "active_until_hour") c.active_until_hour = v.get<int>();
      else if (key == "max_edit_rounds") c.max_edit_rounds = v.get<int>();
      else if (key == "duplication_rate") c.duplication_rate = v.get<double>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "username_prefix") c.username_prefix = v.get<std::string>();
      else if (key == "password") c.password = v.get<std::string>();
      else throw Error(ErrorCode::Validation, "unknown cohort config key: " + key);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("cohort config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const CohortConfig& c) {
  return {{"n_group1", c.n_group1},
          {"n_group2", c.n_group2},
          {"experiment_days", c.experiment_days},
          {"attempts_per_day_rate", c.attempts_per_day_rate},
          {"edit_probability", c.edit_probability},
          {"change_after_edit_probability", c.change_after_edit_probability},
          {"abandon_probability", c.abandon_probability},
          {"rng_seed", c.rng_seed},
          {"start_date", c.start_date},
          {"time_zone", c.time_zone},
          {"active_from_hour", c.active_from_hour},
          {"active_until_hour", c.active_until_hour},
          {"max_edit_rounds", c.max_edit_rounds},
          {"duplication_rate", c.duplication_rate},
          {"threads", c.threads},
          {"username_prefix", c.username_prefix}};
}

CohortConfig load_cohort_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::Validation, path.string() + ": malformed JSON");
  return cohort_config_from_json(doc);
}

json to_json(const RunManifest& m) {
  json users = json::array();
  for (const auto& t : m.users) {
    users.push_back({{"username", t.username},
                     {"user_id", t.user_id},
                     {"app_variant", to_string(t.app_variant)},
                     {"attempts", t.attempts},
                     {"interventions", t.interventions},
                     {"edits", t.edits},
                     {"posts", t.posts},
                     {"shares", t.shares},
                     {"abandoned", t.abandoned},
                     {"duplicates_sent", t.duplicates_sent}});
  }
  return {{"format", "nudgelab-run-manifest/1"},
          {"config", to_json(m.config)},
          {"users_created", m.users_created},
          {"events_emitted", m.events_emitted},
          {"requests_sent", m.requests_sent},
          {"duplicates_sent", m.duplicates_sent},
          {"users", users}};
}

RunManifest run_cohort(const CohortConfig& config, const ClientFactory& clients, RequestLog* log) {
  config.validate();
  absl::CivilDay first_day = parse_day(config.start_date);
  absl::TimeZone zone;
  if (!absl::LoadTimeZone(config.time_zone, &zone)) {
    throw Error(ErrorCode::Configuration, "unknown time zone " + config.time_zone);
  }
  Timestamp registered_at = from_epoch_ms(absl::ToUnixMillis(absl::FromCivil(first_day, zone)));

  std::vector<Agent> agents;
  int total = config.n_group1 + config.n_group2;
  for (int i = 0; i < total; ++i) {
    Agent a;
    a.index = i;
    a.variant = i < config.n_group1 ? AppVariant::V1 : AppVariant::V2;
    a.language = i % 2 == 0 ? Language::EN : Language::DE;
    a.username = config.username_prefix + "-" + std::to_string(config.rng_seed) + "-" +
                 std::string(to_string(a.variant)) + "-" + std::to_string(i);
    agents.push_back(std::move(a));
  }

  RunManifest manifest;
  manifest.config = config;

  // Registration is sequential so user ids follow agent order.
  {
    auto client = clients();
    for (auto& a : agents) {
      json body = {{"username", a.username},
                   {"password", config.password},
                   {"app_variant", to_string(a.variant)},
                   {"language", to_string(a.language)},
                   {"client_timestamp", format_iso8601(registered_at)}};
      ApiResult res = client->post("/api/v1/register", body);
      ++manifest.requests_sent;
      if (log) log->push_back({"/api/v1/register", body, a.username, res, false});
      if (!res.ok()) {
        throw Error(ErrorCode::Io, "register " + a.username + " -> " + std::to_string(res.status) +
                                       " " + res.body.dump());
      }
      a.tally.username = a.username;
      a.tally.app_variant = a.variant;
      a.tally.user_id = res.body.at("user_id").get<UserId>();
      ++manifest.users_created;
    }
  }

  int workers = std::min(config.threads, std::max(total, 1));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<int> request_counts(workers, 0);
  auto work = [&](int w) {
    try {
      auto client = clients();
      for (int i = w; i < total; i += workers) {
        AgentRun run(config, agents[i], *client, log != nullptr);
        try {
          run.play(first_day);
        } catch (...) {
          request_counts[w] += run.requests();
          throw;
        }
        request_counts[w] += run.requests();
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  if (log) {
    for (auto& a : agents) {
      for (auto& entry : a.log) log->push_back(std::move(entry));
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (int n : request_counts) manifest.requests_sent += n;
  for (auto& a : agents) {
    manifest.events_emitted += a.tally.edits + a.tally.posts + a.tally.shares;
    manifest.duplicates_sent += a.tally.duplicates_sent;
    manifest.users.push_back(a.tally);
  }
  std::sort(manifest.users.begin(), manifest.users.end(),
            [](const UserTally& x, const UserTally& y) { return x.user_id < y.user_id; });
  return manifest;
}

RunManifest run_cohort(const CohortConfig& config, ApiClient& client, RequestLog* log) {
  // Borrowed client; the factory hands out non-owning views of it.
  struct Borrowed final : ApiClient {
    explicit Borrowed(ApiClient& c) : inner(c) {}
    ApiResult post(std::string_view path, const json& body) override {
      return inner.post(path, body);
    }
    ApiResult get(std::string_view path) override { return inner.get(path); }
    ApiClient& inner;
  };
  CohortConfig single = config;
  single.threads = 1;
  return run_cohort(single, [&client] { return std::make_unique<Borrowed>(client); }, log);
}

}  // namespace nudgelab
