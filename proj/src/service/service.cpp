#include "nudgelab/service/service.hpp"

#include "nudgelab/domain/corpus.hpp"
#include "nudgelab/domain/crypto.hpp"
#include "nudgelab/domain/digest.hpp"
#include "nudgelab/domain/error.hpp"

namespace nudgelab {
namespace {

constexpr std::size_t kMinPasswordLength = 8;
constexpr std::size_t kMaxUsernameLength = 64;

std::vector<InterventionMessage> checked_corpus(const EventStore& store, const ServiceConfig& c) {
  auto corpus = store.corpus();
  if (c.require_corpus && corpus.size() != static_cast<std::size_t>(kCorpusSize)) {
    throw Error(ErrorCode::Configuration,
                "message corpus not seeded (found " + std::to_string(corpus.size()) +
                    " of 26 messages); run seed-corpus first");
  }
  return corpus;
}

ActivityEvent make_event(const std::string& client_event_id, UserId user, PopupAction action,
                         std::optional<int> message_id, const ContentFields& content,
                         Timestamp now) {
  if (!is_uuid(client_event_id)) {
    throw Error(ErrorCode::Validation, "client_event_id must be an RFC 4122 identifier");
  }
  if (content.post_length < 0) throw Error(ErrorCode::Validation, "post_length must be >= 0");
  auto post_hash = ContentDigest::parse(content.post_hash);
  auto image_hash = ContentDigest::parse(content.image_hash);
  if (!post_hash) throw Error(ErrorCode::Validation, "post_hash must be 64 lowercase hex");
  if (!image_hash) throw Error(ErrorCode::Validation, "image_hash must be 64 lowercase hex");

  ActivityEvent e;
  e.client_event_id = client_event_id;
  e.user_id = user;
  e.popup_action = action;
  e.message_id = message_id;
  e.post_length = content.post_length;
  e.post_hash = *post_hash;
  e.image_hash = *image_hash;
  e.timestamp = now;
  return e;
}

}  // namespace

Service::Service(EventStore& store, ServiceConfig config, std::shared_ptr<const Clock> clock)
    : store_(store),
      config_(std::move(config)),
      clock_(clock ? std::move(clock) : std::make_shared<SystemClock>()),
      engine_(config_.policy, checked_corpus(store, config_)) {
  if (config_.server_secret.empty()) {
    throw Error(ErrorCode::Configuration, "server_secret must not be empty");
  }
  if (config_.session_ttl_minutes < 1) {
    throw Error(ErrorCode::Configuration, "session_ttl_minutes must be >= 1");
  }
  dummy_digest_ = crypto::hash_password("not-a-real-password", config_.password_iterations);
}

Timestamp Service::now_for(std::optional<Timestamp> client_timestamp) const {
  if (config_.clock_mode == ClockMode::Client && client_timestamp) return *client_timestamp;
  return clock_->now();
}

UserAccount Service::authenticate(const std::string& session_token, Timestamp now) const {
  auto session = store_.find_session(session_token);
  if (!session || now >= session->expires_at) {
    throw Error(ErrorCode::Authentication, "invalid or expired session");
  }
  auto user = store_.find_user(session->user_id);
  if (!user) throw Error(ErrorCode::Authentication, "invalid or expired session");
  return *user;
}

RegisterResponse Service::register_user(const RegisterRequest& req) {
  if (req.username.empty() || req.username.size() > kMaxUsernameLength) {
    throw Error(ErrorCode::Validation, "username must be 1..64 characters");
  }
  if (req.password.size() < kMinPasswordLength) {
    throw Error(ErrorCode::Validation, "password must be at least 8 characters");
  }
  const Timestamp now = now_for(req.client_timestamp);
  std::string digest = crypto::hash_password(req.password, config_.password_iterations);

  return store_.transaction([&] {
    UserAccount draft;
    draft.username = req.username;
    draft.password_digest = digest;
    draft.app_variant = req.app_variant;
    draft.language = req.language;
    draft.registration_code = "";
    draft.created_at = now;
    UserId id = store_.insert_user(draft);
    std::string code = make_registration_code(id, config_.server_secret);
    store_.set_registration_code(id, code);
    return RegisterResponse{id, code};
  });
}

LoginResponse Service::login(const std::string& username, const std::string& password,
                             std::optional<Timestamp> client_timestamp) {
  auto user = store_.find_user_by_name(username);
  // Same work either way, so timing does not reveal whether the user exists.
  bool ok = crypto::verify_password(password, user ? user->password_digest : dummy_digest_);
  if (!user || !ok) throw Error(ErrorCode::Authentication, "invalid username or password");

  const Timestamp now = now_for(client_timestamp);
  Session s{crypto::random_hex(16), user->user_id, now,
            now + std::chrono::minutes(config_.session_ttl_minutes)};
  store_.insert_session(s);
  return {s.session_token, s.expires_at};
}

void Service::logout(const std::string& session_token) {
  authenticate(session_token, clock_->now());
  store_.delete_session(session_token);
}

ShareAttemptResponse Service::replay_intervention(const InterventionToken& token,
                                                  const UserAccount& user) const {
  ShareAttemptResponse r;
  r.decision = DecisionKind::Intervene;
  r.intervention_token = token.token;
  r.token_expires_at = token.expires_at;
  if (token.message_id) {
    r.message_id = token.message_id;
    for (const auto& m : engine_.corpus()) {
      if (m.message_id == *token.message_id) r.message_text = m.text(user.language);
    }
  }
  return r;
}

ShareAttemptResponse Service::share_attempt(const ShareAttemptRequest& req) {
  const Timestamp now = now_for(req.client_timestamp);
  const UserAccount user = authenticate(req.session_token, now);
  // Validates the content fields up front, before any state is touched.
  ActivityEvent pass_event = make_event(req.client_event_id, user.user_id,
                                        PopupAction::ShareNoIntervention, std::nullopt,
                                        req.content, now);

  return store_.transaction([&]() -> ShareAttemptResponse {
    // Per user: under the client clock another agent may be days behind.
    store_.expire_tokens(now, user.user_id);

    if (auto prior = store_.find_event_by_client_id(req.client_event_id)) {
      if (prior->user_id != user.user_id ||
          prior->popup_action != PopupAction::ShareNoIntervention) {
        throw Error(ErrorCode::Conflict, "client_event_id already used for another request");
      }
      ShareAttemptResponse r;
      r.decision = DecisionKind::Pass;
      r.event_id = prior->event_id;
      return r;
    }
    if (auto prior = store_.find_token_by_share_event(req.client_event_id)) {
      if (prior->user_id != user.user_id) {
        throw Error(ErrorCode::Conflict, "client_event_id already used for another request");
      }
      return replay_intervention(*prior, user);
    }

    auto summary = store_.interventions_today(user.user_id, now, engine_.calendar());
    auto outcome = engine_.decide(user, now, summary);
    if (outcome.kind == DecisionKind::Pass) {
      ShareAttemptResponse r;
      r.decision = DecisionKind::Pass;
      r.event_id = store_.append_event(pass_event);
      return r;
    }
    store_.insert_token(*outcome.token, req.client_event_id);
    return replay_intervention(*outcome.token, user);
  });
}

ResolveResponse Service::resolve(const ResolveRequest& req) {
  const Timestamp now = now_for(req.client_timestamp);
  const UserAccount user = authenticate(req.session_token, now);
  store_.expire_tokens(now, user.user_id);

  return store_.transaction([&]() -> ResolveResponse {
    if (auto prior = store_.find_event_by_client_id(req.client_event_id)) {
      if (prior->user_id != user.user_id || prior->popup_action != to_popup_action(req.action)) {
        throw Error(ErrorCode::Conflict, "client_event_id already used for another request");
      }
      return {prior->event_id, prior->popup_action, prior->message_id};
    }

    auto token = store_.find_token(req.intervention_token);
    if (!token) throw Error(ErrorCode::NotFound, "unknown intervention token");
    if (token->user_id != user.user_id) {
      throw Error(ErrorCode::Authorization, "intervention token belongs to another user");
    }
    TokenState next = resolve_transition(*token, req.action, now);
    ActivityEvent event = make_event(req.client_event_id, user.user_id,
                                     to_popup_action(req.action), token->message_id, req.content,
                                     now);
    if (!store_.transition_token(token->token, TokenState::Pending, next)) {
      throw Error(ErrorCode::Conflict, "intervention token already resolved");
    }
    EventId id = store_.append_event(event, token->token);
    return {id, event.popup_action, event.message_id};
  });
}

int Service::expire_tokens() { return store_.expire_tokens(clock_->now()); }

}  // namespace nudgelab
