#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "nudgelab/domain/types.hpp"
#include "nudgelab/engine/engine.hpp"
#include "nudgelab/store/export.hpp"
#include "nudgelab/store/sqlite.hpp"

namespace nudgelab {

struct TimeRange {
  std::optional<Timestamp> from;  // inclusive
  std::optional<Timestamp> to;    // exclusive
};

struct Session {
  std::string session_token;
  UserId user_id = 0;
  Timestamp issued_at{};
  Timestamp expires_at{};
};

struct PopupActionRow {
  int action_id;
  std::string description;
};

// Persistence for users, the message corpus, activity events, intervention
// tokens and sessions. Tables mirror users_table, interventions,
// intervention_categories, popup_actions and user_activity; tokens and
// sessions are auxiliary.
//
// One connection guarded by a recursive mutex: every public call is atomic,
// and transaction() makes a multi-call sequence atomic.
class EventStore {
 public:
  // ":memory:" opens a private in-memory store.
  explicit EventStore(const std::string& path);

  template <typename F>
  auto transaction(F&& body) -> decltype(body()) {
    std::lock_guard lock(mutex_);
    if (depth_ > 0) return body();
    db_.exec("BEGIN IMMEDIATE");
    ++depth_;
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        --depth_;
        db_.exec("COMMIT");
      } else {
        auto result = body();
        --depth_;
        db_.exec("COMMIT");
        return result;
      }
    } catch (...) {
      --depth_;
      try {
        db_.exec("ROLLBACK");
      } catch (...) {
      }
      throw;
    }
  }

  // users_table
  UserId insert_user(const UserAccount& draft);
  void set_registration_code(UserId id, const std::string& code);
  std::optional<UserAccount> find_user(UserId id) const;
  std::optional<UserAccount> find_user_by_name(const std::string& username) const;
  std::vector<UserAccount> users() const;
  std::vector<RosterRow> roster() const;

  // interventions + intervention_categories
  void seed_corpus(const std::vector<InterventionMessage>& corpus);
  std::vector<InterventionMessage> corpus() const;
  std::vector<MessageCategory> categories() const;
  std::vector<PopupActionRow> popup_actions() const;

  // user_activity. Idempotent on client_event_id: a resubmission returns the
  // stored event_id and writes nothing. Throws Error(Validation) for unknown
  // users/messages or a message_id that contradicts the user's variant.
  EventId append_event(const ActivityEvent& event,
                       const std::optional<std::string>& intervention_token = std::nullopt);
  std::optional<ActivityEvent> find_event_by_client_id(const std::string& client_event_id) const;
  // Ascending by timestamp, ties by event_id. Throws Error(NotFound) for
  // unknown users.
  std::vector<ActivityEvent> query_user_events(UserId user, const TimeRange& range = {}) const;
  std::vector<ExportRow> export_rows() const;
  std::int64_t event_count() const;

  // Writes the events export; returns the number of rows. Throws Error(Io)
  // when the destination cannot be written.
  std::int64_t export_events(const std::filesystem::path& destination) const;
  std::int64_t export_roster(const std::filesystem::path& destination) const;

  // intervention tokens
  void insert_token(const InterventionToken& token, const std::string& share_client_event_id);
  std::optional<InterventionToken> find_token(const std::string& token) const;
  std::optional<InterventionToken> find_token_by_share_event(
      const std::string& share_client_event_id) const;
  // Compare-and-set; false when the token was not in `from`.
  bool transition_token(const std::string& token, TokenState from, TokenState to);
  // Only `user`'s tokens when given.
  int expire_tokens(Timestamp now, std::optional<UserId> user = std::nullopt);
  std::vector<InterventionToken> tokens() const;
  std::vector<Issuance> issuances(UserId user) const;

  // Counts of today's issuances in the calendar's zone, latest issuance ever
  // and today's shown message ids. Throws Error(NotFound) for unknown users.
  IssuanceSummary interventions_today(UserId user, Timestamp now,
                                      const DayCalendar& calendar) const;

  // sessions
  void insert_session(const Session& s);
  std::optional<Session> find_session(const std::string& token) const;
  void delete_session(const std::string& token);

 private:
  void require_user(UserId id) const;

  mutable std::recursive_mutex mutex_;
  mutable sqlite::Database db_;
  int depth_ = 0;
};

}  // namespace nudgelab
