#include "nudgelab/store/event_store.hpp"

#include <fstream>
#include <limits>

#include "nudgelab/domain/corpus.hpp"
#include "nudgelab/domain/error.hpp"

namespace nudgelab {
namespace {

constexpr std::string_view kSchema = R"sql(
CREATE TABLE IF NOT EXISTS users_table (
  user_id           INTEGER PRIMARY KEY AUTOINCREMENT,
  username          TEXT NOT NULL UNIQUE,
  password_digest   TEXT NOT NULL,
  app_variant       TEXT NOT NULL CHECK (app_variant IN ('V1', 'V2')),
  language          TEXT NOT NULL CHECK (language IN ('EN', 'DE')),
  registration_code TEXT NOT NULL,
  created_at        INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS intervention_categories (
  category_id INTEGER PRIMARY KEY,
  name        TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS interventions (
  msg_id      INTEGER PRIMARY KEY CHECK (msg_id BETWEEN 1 AND 26),
  category_id INTEGER NOT NULL REFERENCES intervention_categories(category_id),
  risk_value  REAL NOT NULL CHECK (risk_value >= 0),
  text_en     TEXT NOT NULL,
  text_de     TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS popup_actions (
  action_id   INTEGER PRIMARY KEY,
  description TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS user_activity (
  event_id           INTEGER PRIMARY KEY AUTOINCREMENT,
  client_event_id    TEXT NOT NULL UNIQUE,
  popup_action       INTEGER NOT NULL REFERENCES popup_actions(action_id),
  user_id            INTEGER NOT NULL REFERENCES users_table(user_id),
  msg_id             INTEGER REFERENCES interventions(msg_id),
  post_length        INTEGER NOT NULL CHECK (post_length >= 0),
  post_hash          TEXT NOT NULL,
  image_hash         TEXT NOT NULL,
  timestamp          INTEGER NOT NULL,
  intervention_token TEXT UNIQUE REFERENCES intervention_tokens(token)
);
CREATE INDEX IF NOT EXISTS user_activity_by_user ON user_activity(user_id, timestamp, event_id);
CREATE TABLE IF NOT EXISTS intervention_tokens (
  token                 TEXT PRIMARY KEY,
  user_id               INTEGER NOT NULL REFERENCES users_table(user_id),
  msg_id                INTEGER REFERENCES interventions(msg_id),
  issued_at             INTEGER NOT NULL,
  expires_at            INTEGER NOT NULL,
  state                 TEXT NOT NULL,
  share_client_event_id TEXT NOT NULL UNIQUE
);
CREATE INDEX IF NOT EXISTS tokens_by_user ON intervention_tokens(user_id, issued_at);
CREATE INDEX IF NOT EXISTS tokens_by_state ON intervention_tokens(state, expires_at);
CREATE TABLE IF NOT EXISTS sessions (
  session_token TEXT PRIMARY KEY,
  user_id       INTEGER NOT NULL REFERENCES users_table(user_id),
  issued_at     INTEGER NOT NULL,
  expires_at    INTEGER NOT NULL
);
)sql";

constexpr std::string_view kUserColumns =
    "user_id, username, password_digest, app_variant, language, registration_code, created_at";
constexpr std::string_view kEventColumns =
    "event_id, client_event_id, user_id, popup_action, msg_id, post_length, post_hash, "
    "image_hash, timestamp";
constexpr std::string_view kTokenColumns = "token, user_id, msg_id, issued_at, expires_at, state";

UserAccount read_user(const sqlite::Statement& s) {
  UserAccount u;
  u.user_id = s.column_int(0);
  u.username = s.column_text(1);
  u.password_digest = s.column_text(2);
  u.app_variant = parse_app_variant(s.column_text(3)).value_or(AppVariant::V1);
  u.language = parse_language(s.column_text(4)).value_or(Language::EN);
  u.registration_code = s.column_text(5);
  u.created_at = from_epoch_ms(s.column_int(6));
  return u;
}

ActivityEvent read_event(const sqlite::Statement& s, int offset = 0) {
  ActivityEvent e;
  e.event_id = s.column_int(offset + 0);
  e.client_event_id = s.column_text(offset + 1);
  e.user_id = s.column_int(offset + 2);
  e.popup_action =
      popup_action_from_code(static_cast<int>(s.column_int(offset + 3))).value_or(PopupAction::Edit);
  e.message_id = s.column_optional_int(offset + 4);
  e.post_length = s.column_int(offset + 5);
  e.post_hash = ContentDigest::parse(s.column_text(offset + 6)).value_or(ContentDigest{});
  e.image_hash = ContentDigest::parse(s.column_text(offset + 7)).value_or(ContentDigest{});
  e.timestamp = from_epoch_ms(s.column_int(offset + 8));
  return e;
}

InterventionToken read_token(const sqlite::Statement& s) {
  InterventionToken t;
  t.token = s.column_text(0);
  t.user_id = s.column_int(1);
  t.message_id = s.column_optional_int(2);
  t.issued_at = from_epoch_ms(s.column_int(3));
  t.expires_at = from_epoch_ms(s.column_int(4));
  t.state = parse_token_state(s.column_text(5)).value_or(TokenState::Expired);
  return t;
}

std::string sql(std::initializer_list<std::string_view> parts) {
  std::string out;
  for (auto p : parts) out.append(p);
  return out;
}

}  // namespace

EventStore::EventStore(const std::string& path) : db_(path) {
  db_.exec("PRAGMA foreign_keys = ON");
  if (path != ":memory:") {
    db_.exec("PRAGMA journal_mode = WAL");
    db_.exec("PRAGMA synchronous = FULL");
  }
  db_.exec(kSchema);

  transaction([&] {
    for (const auto& c : message_categories()) {
      sqlite::Statement s(db_,
                          "INSERT OR IGNORE INTO intervention_categories(category_id, name) "
                          "VALUES (?, ?)");
      s.bind(1, c.category_id).bind(2, c.name).run();
    }
    for (auto a : {PopupAction::Edit, PopupAction::Post, PopupAction::ShareNoIntervention}) {
      sqlite::Statement s(db_,
                          "INSERT OR IGNORE INTO popup_actions(action_id, description) "
                          "VALUES (?, ?)");
      s.bind(1, to_code(a)).bind(2, describe(a)).run();
    }
  });
}

void EventStore::require_user(UserId id) const {
  if (!find_user(id)) throw Error(ErrorCode::NotFound, "unknown user " + std::to_string(id));
}

UserId EventStore::insert_user(const UserAccount& u) {
  std::lock_guard lock(mutex_);
  if (u.username.empty()) throw Error(ErrorCode::Validation, "username must not be empty");
  if (find_user_by_name(u.username)) {
    throw Error(ErrorCode::Conflict, "username already registered");
  }
  sqlite::Statement s(db_,
                      "INSERT INTO users_table(username, password_digest, app_variant, language, "
                      "registration_code, created_at) VALUES (?, ?, ?, ?, ?, ?)");
  s.bind(1, u.username)
      .bind(2, u.password_digest)
      .bind(3, to_string(u.app_variant))
      .bind(4, to_string(u.language))
      .bind(5, u.registration_code)
      .bind(6, to_epoch_ms(u.created_at))
      .run();
  return db_.last_insert_rowid();
}

void EventStore::set_registration_code(UserId id, const std::string& code) {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, "UPDATE users_table SET registration_code = ? WHERE user_id = ?");
  s.bind(1, code).bind(2, id).run();
}

std::optional<UserAccount> EventStore::find_user(UserId id) const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, sql({"SELECT ", kUserColumns, " FROM users_table WHERE user_id = ?"}));
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return read_user(s);
}

std::optional<UserAccount> EventStore::find_user_by_name(const std::string& username) const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, sql({"SELECT ", kUserColumns, " FROM users_table WHERE username = ?"}));
  s.bind(1, username);
  if (!s.step()) return std::nullopt;
  return read_user(s);
}

std::vector<UserAccount> EventStore::users() const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, sql({"SELECT ", kUserColumns, " FROM users_table ORDER BY user_id"}));
  std::vector<UserAccount> out;
  while (s.step()) out.push_back(read_user(s));
  return out;
}

std::vector<RosterRow> EventStore::roster() const {
  std::vector<RosterRow> out;
  for (const auto& u : users()) out.push_back({u.user_id, u.app_variant, u.language, u.created_at});
  return out;
}

void EventStore::seed_corpus(const std::vector<InterventionMessage>& corpus) {
  validate_corpus(corpus);
  transaction([&] {
    for (const auto& m : corpus) {
      sqlite::Statement s(db_,
                          "INSERT INTO interventions(msg_id, category_id, risk_value, text_en, "
                          "text_de) VALUES (?, ?, ?, ?, ?) ON CONFLICT(msg_id) DO UPDATE SET "
                          "category_id = excluded.category_id, risk_value = excluded.risk_value, "
                          "text_en = excluded.text_en, text_de = excluded.text_de");
      s.bind(1, m.message_id)
          .bind(2, m.category_id)
          .bind(3, m.risk_value)
          .bind(4, m.text_en)
          .bind(5, m.text_de)
          .run();
    }
  });
}

std::vector<InterventionMessage> EventStore::corpus() const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      "SELECT msg_id, category_id, risk_value, text_en, text_de FROM interventions "
                      "ORDER BY msg_id");
  std::vector<InterventionMessage> out;
  while (s.step()) {
    out.push_back({static_cast<int>(s.column_int(0)), static_cast<int>(s.column_int(1)),
                   s.column_double(2), s.column_text(3), s.column_text(4)});
  }
  return out;
}

std::vector<MessageCategory> EventStore::categories() const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      "SELECT category_id, name FROM intervention_categories ORDER BY category_id");
  std::vector<MessageCategory> out;
  while (s.step()) out.push_back({static_cast<int>(s.column_int(0)), s.column_text(1)});
  return out;
}

std::vector<PopupActionRow> EventStore::popup_actions() const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, "SELECT action_id, description FROM popup_actions ORDER BY action_id");
  std::vector<PopupActionRow> out;
  while (s.step()) out.push_back({static_cast<int>(s.column_int(0)), s.column_text(1)});
  return out;
}

EventId EventStore::append_event(const ActivityEvent& e,
                                 const std::optional<std::string>& intervention_token) {
  validate_event(e);
  return transaction([&]() -> EventId {
    if (auto existing = find_event_by_client_id(e.client_event_id)) return existing->event_id;

    auto user = find_user(e.user_id);
    if (!user) throw Error(ErrorCode::Validation, "event references unknown user");
    bool resolution = e.popup_action != PopupAction::ShareNoIntervention;
    if (resolution && user->app_variant == AppVariant::V2 && !e.message_id) {
      throw Error(ErrorCode::Validation, "V2 resolution events must carry a message_id");
    }
    if (user->app_variant == AppVariant::V1 && e.message_id) {
      throw Error(ErrorCode::Validation, "V1 events never carry a message_id");
    }
    if (e.message_id) {
      sqlite::Statement m(db_, "SELECT 1 FROM interventions WHERE msg_id = ?");
      m.bind(1, *e.message_id);
      if (!m.step()) throw Error(ErrorCode::Validation, "event references unknown message");
    }

    sqlite::Statement s(db_,
                        "INSERT INTO user_activity(client_event_id, popup_action, user_id, "
                        "msg_id, post_length, post_hash, image_hash, timestamp, "
                        "intervention_token) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)");
    s.bind(1, e.client_event_id)
        .bind(2, to_code(e.popup_action))
        .bind(3, e.user_id)
        .bind(4, e.message_id)
        .bind(5, e.post_length)
        .bind(6, e.post_hash.hex())
        .bind(7, e.image_hash.hex())
        .bind(8, to_epoch_ms(e.timestamp));
    if (intervention_token) {
      s.bind(9, *intervention_token);
    } else {
      s.bind_null(9);
    }
    s.run();
    return db_.last_insert_rowid();
  });
}

std::optional<ActivityEvent> EventStore::find_event_by_client_id(
    const std::string& client_event_id) const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      sql({"SELECT ", kEventColumns, " FROM user_activity WHERE client_event_id = ?"}));
  s.bind(1, client_event_id);
  if (!s.step()) return std::nullopt;
  return read_event(s);
}

std::vector<ActivityEvent> EventStore::query_user_events(UserId user,
                                                         const TimeRange& range) const {
  std::lock_guard lock(mutex_);
  require_user(user);
  sqlite::Statement s(db_, sql({"SELECT ", kEventColumns,
                                " FROM user_activity WHERE user_id = ? AND timestamp >= ? AND "
                                "timestamp < ? ORDER BY timestamp, event_id"}));
  s.bind(1, user)
      .bind(2, range.from ? to_epoch_ms(*range.from) : std::numeric_limits<std::int64_t>::min())
      .bind(3, range.to ? to_epoch_ms(*range.to) : std::numeric_limits<std::int64_t>::max());
  std::vector<ActivityEvent> out;
  while (s.step()) out.push_back(read_event(s));
  return out;
}

std::vector<ExportRow> EventStore::export_rows() const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      "SELECT a.event_id, a.client_event_id, a.user_id, a.popup_action, a.msg_id, "
                      "a.post_length, a.post_hash, a.image_hash, a.timestamp, u.app_variant "
                      "FROM user_activity a JOIN users_table u ON u.user_id = a.user_id "
                      "ORDER BY a.event_id");
  std::vector<ExportRow> out;
  while (s.step()) {
    out.push_back({read_event(s), parse_app_variant(s.column_text(9)).value_or(AppVariant::V1)});
  }
  return out;
}

std::int64_t EventStore::event_count() const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, "SELECT COUNT(*) FROM user_activity");
  s.step();
  return s.column_int(0);
}

std::int64_t EventStore::export_events(const std::filesystem::path& destination) const {
  auto rows = export_rows();
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + destination.string());
  write_events(out, rows);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed: " + destination.string());
  return static_cast<std::int64_t>(rows.size());
}

std::int64_t EventStore::export_roster(const std::filesystem::path& destination) const {
  auto rows = roster();
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + destination.string());
  write_roster(out, rows);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed: " + destination.string());
  return static_cast<std::int64_t>(rows.size());
}

void EventStore::insert_token(const InterventionToken& t, const std::string& share_client_event_id) {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      "INSERT INTO intervention_tokens(token, user_id, msg_id, issued_at, "
                      "expires_at, state, share_client_event_id) VALUES (?, ?, ?, ?, ?, ?, ?)");
  s.bind(1, t.token)
      .bind(2, t.user_id)
      .bind(3, t.message_id)
      .bind(4, to_epoch_ms(t.issued_at))
      .bind(5, to_epoch_ms(t.expires_at))
      .bind(6, to_string(t.state))
      .bind(7, share_client_event_id)
      .run();
}

std::optional<InterventionToken> EventStore::find_token(const std::string& token) const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      sql({"SELECT ", kTokenColumns, " FROM intervention_tokens WHERE token = ?"}));
  s.bind(1, token);
  if (!s.step()) return std::nullopt;
  return read_token(s);
}

std::optional<InterventionToken> EventStore::find_token_by_share_event(
    const std::string& share_client_event_id) const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, sql({"SELECT ", kTokenColumns,
                                " FROM intervention_tokens WHERE share_client_event_id = ?"}));
  s.bind(1, share_client_event_id);
  if (!s.step()) return std::nullopt;
  return read_token(s);
}

bool EventStore::transition_token(const std::string& token, TokenState from, TokenState to) {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, "UPDATE intervention_tokens SET state = ? WHERE token = ? AND state = ?");
  s.bind(1, to_string(to)).bind(2, token).bind(3, to_string(from)).run();
  return db_.changes() == 1;
}

int EventStore::expire_tokens(Timestamp now, std::optional<UserId> user) {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      "UPDATE intervention_tokens SET state = 'EXPIRED' "
                      "WHERE state = 'PENDING' AND expires_at <= ? AND (? IS NULL OR user_id = ?)");
  s.bind(1, to_epoch_ms(now));
  if (user) {
    s.bind(2, *user).bind(3, *user);
  } else {
    s.bind_null(2).bind_null(3);
  }
  s.run();
  return db_.changes();
}

std::vector<InterventionToken> EventStore::tokens() const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, sql({"SELECT ", kTokenColumns,
                                " FROM intervention_tokens ORDER BY user_id, issued_at, token"}));
  std::vector<InterventionToken> out;
  while (s.step()) out.push_back(read_token(s));
  return out;
}

std::vector<Issuance> EventStore::issuances(UserId user) const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      "SELECT issued_at, msg_id FROM intervention_tokens WHERE user_id = ? "
                      "ORDER BY issued_at");
  s.bind(1, user);
  std::vector<Issuance> out;
  while (s.step()) out.push_back({from_epoch_ms(s.column_int(0)), s.column_optional_int(1)});
  return out;
}

IssuanceSummary EventStore::interventions_today(UserId user, Timestamp now,
                                                const DayCalendar& calendar) const {
  std::lock_guard lock(mutex_);
  require_user(user);
  auto [start, end] = calendar.day_bounds(now);
  IssuanceSummary out;

  sqlite::Statement totals(db_,
                           "SELECT COUNT(*), MAX(issued_at) FROM intervention_tokens "
                           "WHERE user_id = ?");
  totals.bind(1, user);
  totals.step();
  out.issued_total = totals.column_int(0);
  if (!totals.column_is_null(1)) out.last_issued_at = from_epoch_ms(totals.column_int(1));

  sqlite::Statement today(db_,
                          "SELECT msg_id FROM intervention_tokens "
                          "WHERE user_id = ? AND issued_at >= ? AND issued_at < ?");
  today.bind(1, user).bind(2, to_epoch_ms(start)).bind(3, to_epoch_ms(end));
  while (today.step()) {
    ++out.issued_today;
    if (auto m = today.column_optional_int(0)) out.shown_today.insert(*m);
  }
  return out;
}

void EventStore::insert_session(const Session& s) {
  std::lock_guard lock(mutex_);
  sqlite::Statement st(db_,
                       "INSERT INTO sessions(session_token, user_id, issued_at, expires_at) "
                       "VALUES (?, ?, ?, ?)");
  st.bind(1, s.session_token)
      .bind(2, s.user_id)
      .bind(3, to_epoch_ms(s.issued_at))
      .bind(4, to_epoch_ms(s.expires_at))
      .run();
}

std::optional<Session> EventStore::find_session(const std::string& token) const {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_,
                      "SELECT session_token, user_id, issued_at, expires_at FROM sessions "
                      "WHERE session_token = ?");
  s.bind(1, token);
  if (!s.step()) return std::nullopt;
  return Session{s.column_text(0), s.column_int(1), from_epoch_ms(s.column_int(2)),
                 from_epoch_ms(s.column_int(3))};
}

void EventStore::delete_session(const std::string& token) {
  std::lock_guard lock(mutex_);
  sqlite::Statement s(db_, "DELETE FROM sessions WHERE session_token = ?");
  s.bind(1, token).run();
}

}  // namespace nudgelab
