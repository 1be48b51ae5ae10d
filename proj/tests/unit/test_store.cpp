#include <doctest.h>

#include <sstream>

#include "nudgelab/domain/crypto.hpp"
#include "nudgelab/domain/digest.hpp"
#include "nudgelab/domain/error.hpp"
#include "nudgelab/store/audit.hpp"
#include "nudgelab/store/event_store.hpp"
#include "nudgelab/store/export.hpp"
#include "support.hpp"

using namespace nudgelab;
using nudgelab::testing::at;
using nudgelab::testing::uuid_n;
using namespace std::chrono_literals;

namespace {

UserId add_user(EventStore& store, const std::string& name, AppVariant v) {
  UserAccount u;
  u.username = name;
  u.password_digest = "x";
  u.app_variant = v;
  u.created_at = at("2024-05-01T00:00:00Z");
  return store.insert_user(u);
}

ActivityEvent event(int n, UserId user, PopupAction action, std::optional<int> msg,
                    const std::string& when) {
  ActivityEvent e;
  e.client_event_id = uuid_n(n);
  e.user_id = user;
  e.popup_action = action;
  e.message_id = msg;
  e.post_length = n;
  e.post_hash = digest_content(user, "caption " + std::to_string(n));
  e.image_hash = digest_content(user, "image");
  e.timestamp = at(when);
  return e;
}

struct Seeded {
  Seeded() { store.seed_corpus(testing::shipped_corpus()); }
  EventStore store{":memory:"};
};

}  // namespace

TEST_CASE("fixed lookup tables") {
  Seeded s;
  auto actions = s.store.popup_actions();
  REQUIRE(actions.size() == 3);
  CHECK(actions[0].action_id == 0);
  CHECK(actions[2].action_id == 2);
  CHECK(s.store.categories().size() == 6);
  CHECK(s.store.corpus().size() == 26);
  s.store.seed_corpus(testing::shipped_corpus());  // reseeding is an upsert
  CHECK(s.store.corpus().size() == 26);
}

TEST_CASE("users") {
  Seeded s;
  auto id = add_user(s.store, "alice", AppVariant::V2);
  CHECK(s.store.find_user(id)->username == "alice");
  CHECK(s.store.find_user_by_name("alice")->app_variant == AppVariant::V2);
  CHECK_FALSE(s.store.find_user_by_name("bob"));
  try {
    add_user(s.store, "alice", AppVariant::V1);
    FAIL("expected conflict");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Conflict);
  }
}

TEST_CASE("append is idempotent on client_event_id") {
  Seeded s;
  auto u = add_user(s.store, "u", AppVariant::V2);
  auto e = event(1, u, PopupAction::Post, 4, "2024-05-06T10:00:00Z");
  auto first = s.store.append_event(e);
  auto again = s.store.append_event(e);
  CHECK(first == again);
  CHECK(s.store.event_count() == 1);
  auto stored = s.store.find_event_by_client_id(uuid_n(1));
  REQUIRE(stored);
  e.event_id = first;
  CHECK(*stored == e);
}

TEST_CASE("append rejects inconsistent events") {
  Seeded s;
  auto v1 = add_user(s.store, "v1", AppVariant::V1);
  auto v2 = add_user(s.store, "v2", AppVariant::V2);
  CHECK_THROWS_AS(s.store.append_event(event(1, v1, PopupAction::Post, 3, "2024-05-06T10:00:00Z")),
                  Error);
  CHECK_THROWS_AS(
      s.store.append_event(event(2, v2, PopupAction::Post, std::nullopt, "2024-05-06T10:00:00Z")),
      Error);
  CHECK_THROWS_AS(s.store.append_event(event(3, 99, PopupAction::ShareNoIntervention,
                                             std::nullopt, "2024-05-06T10:00:00Z")),
                  Error);
  CHECK_NOTHROW(s.store.append_event(
      event(4, v1, PopupAction::Post, std::nullopt, "2024-05-06T10:00:00Z")));
  CHECK(s.store.event_count() == 1);
}

TEST_CASE("user events come back in time order within a range") {
  Seeded s;
  auto u = add_user(s.store, "u", AppVariant::V1);
  s.store.append_event(event(1, u, PopupAction::ShareNoIntervention, std::nullopt, "2024-05-07T00:00:00Z"));
  s.store.append_event(event(2, u, PopupAction::ShareNoIntervention, std::nullopt, "2024-05-06T23:59:59.999Z"));
  s.store.append_event(event(3, u, PopupAction::ShareNoIntervention, std::nullopt, "2024-05-06T08:00:00Z"));
  s.store.append_event(event(4, u, PopupAction::ShareNoIntervention, std::nullopt, "2024-05-06T08:00:00Z"));
  auto all = s.store.query_user_events(u);
  REQUIRE(all.size() == 4);
  CHECK(all[0].client_event_id == uuid_n(3));
  CHECK(all[1].client_event_id == uuid_n(4));
  CHECK(all[3].client_event_id == uuid_n(1));

  auto day = s.store.query_user_events(u, {at("2024-05-06T00:00:00Z"), at("2024-05-07T00:00:00Z")});
  CHECK(day.size() == 3);
  CHECK_THROWS_AS(s.store.query_user_events(1234), Error);
}

TEST_CASE("store survives reopening") {
  testing::TempDir dir;
  auto path = dir.file("events.db");
  UserId u = 0;
  {
    EventStore store(path);
    store.seed_corpus(testing::shipped_corpus());
    u = add_user(store, "u", AppVariant::V2);
    store.append_event(event(1, u, PopupAction::Edit, 2, "2024-05-06T10:00:00Z"));
  }
  EventStore store(path);
  CHECK(store.event_count() == 1);
  CHECK(store.query_user_events(u)[0].message_id == 2);
}

TEST_CASE("events export round trip") {
  Seeded s;
  auto a = add_user(s.store, "a", AppVariant::V1);
  auto b = add_user(s.store, "b", AppVariant::V2);
  s.store.append_event(event(1, a, PopupAction::Post, std::nullopt, "2024-05-06T10:00:00Z"));
  s.store.append_event(event(2, b, PopupAction::Edit, 26, "2024-05-06T11:00:00.250Z"));
  s.store.append_event(event(3, b, PopupAction::ShareNoIntervention, std::nullopt, "2024-05-06T11:05:00Z"));
  auto rows = s.store.export_rows();
  std::ostringstream out;
  write_events(out, rows);
  auto text = out.str();
  CHECK(text.rfind(std::string(kEventsHeader) + "\n", 0) == 0);
  std::istringstream in(text);
  CHECK(read_events(in, "mem") == rows);

  testing::TempDir dir;
  CHECK(s.store.export_events(dir.file("e.csv")) == 3);
  CHECK(read_events_file(dir.file("e.csv")) == rows);
  CHECK(s.store.export_roster(dir.file("r.csv")) == 2);
  auto roster = read_roster_file(dir.file("r.csv"));
  REQUIRE(roster.size() == 2);
  CHECK(roster[1].app_variant == AppVariant::V2);
}

TEST_CASE("malformed export rows name the source, line and field") {
  std::string good_hash(64, 'a');
  std::string text = std::string(kEventsHeader) + "\n" + "1," + uuid_n(1) + ",1,V1,1,," + "5," +
                     good_hash + "," + good_hash + ",2024-05-06T10:00:00.000Z\n" + "2," +
                     uuid_n(2) + ",1,V1,7,,5," + good_hash + "," + good_hash +
                     ",2024-05-06T10:00:00.000Z\n";
  std::istringstream in(text);
  try {
    read_events(in, "events.csv");
    FAIL("expected a validation error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("events.csv:3") != std::string::npos);
    CHECK(msg.find("popup_action") != std::string::npos);
  }
  std::istringstream wrong_header("id,foo\n");
  CHECK_THROWS_AS(read_events(wrong_header, "x"), Error);
  CHECK_THROWS_AS(read_events_file("/nonexistent/events.csv"), Error);
}

TEST_CASE("token compare-and-set and expiry") {
  Seeded s;
  auto u = add_user(s.store, "u", AppVariant::V2);
  auto other = add_user(s.store, "w", AppVariant::V2);
  InterventionToken t{"tok-1", u, 5, at("2024-05-06T10:00:00Z"), at("2024-05-06T10:15:00Z"),
                      TokenState::Pending};
  s.store.insert_token(t, uuid_n(1));
  InterventionToken t2{"tok-2", other, 6, at("2024-05-06T10:00:00Z"), at("2024-05-06T10:15:00Z"),
                       TokenState::Pending};
  s.store.insert_token(t2, uuid_n(2));
  CHECK(s.store.find_token_by_share_event(uuid_n(1))->token == "tok-1");
  CHECK(s.store.transition_token("tok-1", TokenState::Pending, TokenState::ResolvedPost));
  CHECK_FALSE(s.store.transition_token("tok-1", TokenState::Pending, TokenState::ResolvedEdit));
  CHECK(s.store.find_token("tok-1")->state == TokenState::ResolvedPost);

  CHECK(s.store.expire_tokens(at("2024-05-06T10:15:00Z"), u) == 0);
  CHECK(s.store.expire_tokens(at("2024-05-06T10:14:59Z")) == 0);
  CHECK(s.store.expire_tokens(at("2024-05-06T10:15:00Z")) == 1);
  CHECK(s.store.find_token("tok-2")->state == TokenState::Expired);
}

TEST_CASE("store issuance summary agrees with the reference route") {
  Seeded s;
  auto u = add_user(s.store, "u", AppVariant::V2);
  DayCalendar cal("Europe/Berlin");
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> minutes(0, 3 * 24 * 60);
  std::uniform_int_distribution<int> msg(1, 26);
  for (int i = 0; i < 40; ++i) {
    auto when = at("2024-05-06T00:00:00Z") + std::chrono::minutes(minutes(rng));
    s.store.insert_token({"t" + std::to_string(i), u, msg(rng), when, when + 15min,
                          TokenState::Expired},
                         uuid_n(100 + i));
  }
  auto history = s.store.issuances(u);
  for (int h = 0; h < 80; ++h) {
    auto now = at("2024-05-06T00:00:00Z") + std::chrono::hours(h);
    auto a = s.store.interventions_today(u, now, cal);
    auto b = summarize_issuances(history, now, cal);
    CHECK(a.issued_today == b.issued_today);
    CHECK(a.shown_today == b.shown_today);
    CHECK(a.issued_total == b.issued_total);
  }
}

TEST_CASE("auditor finds planted violations") {
  PolicyConfig policy;
  auto rec = [](UserId u, AppVariant v, const std::string& when, std::optional<int> msg,
                const std::string& ref) { return AuditRecord{u, v, at(when), msg, ref}; };

  SUBCASE("two pop-ups 30 minutes apart") {
    auto v = audit_interventions({rec(1, AppVariant::V1, "2024-05-06T10:00:00Z", {}, "a"),
                                  rec(1, AppVariant::V1, "2024-05-06T10:30:00Z", {}, "b")},
                                 policy);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::MinimumGap);
    CHECK(v[0].refs == std::vector<std::string>{"a", "b"});
  }
  SUBCASE("six pop-ups in one day") {
    std::vector<AuditRecord> r;
    for (int h = 0; h < 6; ++h) {
      char when[32];
      std::snprintf(when, sizeof when, "2024-05-06T%02d:00:00Z", h * 2);
      r.push_back(rec(2, AppVariant::V2, when, h + 1, "r" + std::to_string(h)));
    }
    auto v = audit_interventions(r, policy);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::DailyBudget);
    CHECK(v[0].refs.size() == 6);
  }
  SUBCASE("same message twice in a day") {
    auto v = audit_interventions({rec(3, AppVariant::V2, "2024-05-06T08:00:00Z", 9, "x"),
                                  rec(3, AppVariant::V2, "2024-05-06T12:00:00Z", 9, "y"),
                                  rec(3, AppVariant::V2, "2024-05-07T08:00:00Z", 9, "z")},
                                 policy);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == ViolationKind::SameDayRepeat);
    CHECK(v[0].refs == std::vector<std::string>{"x", "y"});
  }
  SUBCASE("variant and message disagree") {
    auto v = audit_interventions({rec(4, AppVariant::V1, "2024-05-06T08:00:00Z", 2, "m"),
                                  rec(4, AppVariant::V2, "2024-05-06T10:00:00Z", {}, "n")},
                                 policy);
    CHECK(v.size() == 2);
    for (const auto& x : v) CHECK(x.kind == ViolationKind::VariantMessageMismatch);
  }
  SUBCASE("a clean history") {
    CHECK(audit_interventions({rec(5, AppVariant::V2, "2024-05-06T08:00:00Z", 1, "p"),
                               rec(5, AppVariant::V2, "2024-05-06T09:00:00Z", 2, "q")},
                              policy)
              .empty());
  }
}

TEST_CASE("export audit flags duplicates") {
  Seeded s;
  auto u = add_user(s.store, "u", AppVariant::V1);
  s.store.append_event(event(1, u, PopupAction::ShareNoIntervention, std::nullopt, "2024-05-06T10:00:00Z"));
  auto rows = s.store.export_rows();
  rows.push_back(rows[0]);
  rows.back().event.event_id = 2;
  auto v = audit_export(rows, PolicyConfig{});
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::DuplicateClientEventId);
  CHECK(describe(v[0]).find("refs=[2]") != std::string::npos);
}
