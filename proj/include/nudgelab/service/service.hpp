#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nudgelab/domain/types.hpp"
#include "nudgelab/engine/engine.hpp"
#include "nudgelab/service/clock.hpp"
#include "nudgelab/store/event_store.hpp"

namespace nudgelab {

inline constexpr std::string_view kProtocolVersion = "1";
inline constexpr std::string_view kLegend = "Ready to share?";

enum class ClockMode {
  System,  // server clock decides; client timestamps are stored nowhere
  Client,  // simulation only: the request's client_timestamp is "now"
};

struct ServiceConfig {
  std::string server_secret;
  PolicyConfig policy;
  int session_ttl_minutes = 24 * 60;
  int password_iterations = 100000;
  ClockMode clock_mode = ClockMode::System;
  // Refuse to start unless the full corpus is seeded.
  bool require_corpus = true;
};

struct RegisterRequest {
  std::string username;
  std::string password;
  AppVariant app_variant = AppVariant::V1;
  Language language = Language::EN;
  std::optional<Timestamp> client_timestamp;
};

struct RegisterResponse {
  UserId user_id = 0;
  std::string registration_code;
};

struct LoginResponse {
  std::string session_token;
  Timestamp expires_at{};
};

struct ContentFields {
  std::int64_t post_length = 0;
  std::string post_hash;
  std::string image_hash;
};

struct ShareAttemptRequest {
  std::string session_token;
  std::string client_event_id;
  ContentFields content;
  std::optional<Timestamp> client_timestamp;
};

struct ShareAttemptResponse {
  DecisionKind decision = DecisionKind::Pass;
  std::optional<EventId> event_id;  // pass only
  std::optional<std::string> intervention_token;
  std::optional<Timestamp> token_expires_at;
  std::optional<int> message_id;
  std::optional<std::string> message_text;
};

struct ResolveRequest {
  std::string session_token;
  std::string client_event_id;
  std::string intervention_token;
  ResolveAction action = ResolveAction::Post;
  ContentFields content;
  std::optional<Timestamp> client_timestamp;
};

struct ResolveResponse {
  EventId event_id = 0;
  PopupAction popup_action = PopupAction::Post;
  std::optional<int> message_id;
};

// The single writer into engine and store. Each share attempt runs its
// budget check, gap check and token issuance inside one store transaction,
// so concurrent attempts by one user cannot both draw the last slot.
class Service {
 public:
  // Throws Error(Configuration) for an empty secret, an invalid policy, or
  // an unseeded corpus while require_corpus is set.
  Service(EventStore& store, ServiceConfig config, std::shared_ptr<const Clock> clock);

  RegisterResponse register_user(const RegisterRequest& req);
  LoginResponse login(const std::string& username, const std::string& password,
                      std::optional<Timestamp> client_timestamp = std::nullopt);
  void logout(const std::string& session_token);
  ShareAttemptResponse share_attempt(const ShareAttemptRequest& req);
  ResolveResponse resolve(const ResolveRequest& req);

  int expire_tokens();

  const InterventionEngine& engine() const { return engine_; }
  const ServiceConfig& config() const { return config_; }
  EventStore& store() { return store_; }

 private:
  Timestamp now_for(std::optional<Timestamp> client_timestamp) const;
  UserAccount authenticate(const std::string& session_token, Timestamp now) const;
  ShareAttemptResponse replay_intervention(const InterventionToken& token,
                                           const UserAccount& user) const;

  EventStore& store_;
  ServiceConfig config_;
  std::shared_ptr<const Clock> clock_;
  InterventionEngine engine_;
  std::string dummy_digest_;
};

}  // namespace nudgelab
