#include <doctest.h>

#include <sstream>

#include "nudgelab/domain/corpus.hpp"
#include "nudgelab/domain/crypto.hpp"
#include "nudgelab/domain/digest.hpp"
#include "nudgelab/domain/error.hpp"
#include "nudgelab/domain/survey.hpp"
#include "nudgelab/domain/time.hpp"
#include "nudgelab/domain/types.hpp"
#include "support.hpp"

using namespace nudgelab;
using nudgelab::testing::at;

TEST_CASE("sha256 of known byte strings") {
  CHECK(crypto::sha256_hex("7:hello") ==
        "d7bd4189af84a56006c282c883b3be9b6dfd3b6f17dda26411893bb7a62bba87");
  CHECK(crypto::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("content digests salt with the user id") {
  CHECK(digest_content(7, "hello").hex() ==
        "d7bd4189af84a56006c282c883b3be9b6dfd3b6f17dda26411893bb7a62bba87");
  CHECK(digest_content(7, "").hex() ==
        "70fb8417d44dffa58b1b1525d36d36d564dac7ab2f672e6d48839b63c705dda6");
  CHECK(digest_content(8, "hello").hex() ==
        "215c244d2e0d5d45156b0561b9657f9ebf8107f746666e7fe4999379d99312a4");
  CHECK(digest_content(42, "Grüße aus Köln 🌍").hex() ==
        "88a1e3527e6281953b4d2acab858c0202e1c7335aa7e2cf12ef2639c2e724d27");
}

TEST_CASE("shared digest vectors match bit for bit") {
  auto vectors = testing::oracle().at("digests");
  REQUIRE(vectors.size() == 20);
  for (const auto& v : vectors) {
    auto got = digest_content(v.at("user_id").get<UserId>(), v.at("content").get<std::string>());
    CHECK(got.hex() == v.at("digest").get<std::string>());
    CHECK(got.hex().size() == 64);
  }
}

TEST_CASE("registration code") {
  CHECK(make_registration_code(1, "s3cret") == "12CF9AE6");
  CHECK(make_registration_code(1, "other-secret") == "A5BCEA6C");
  CHECK_THROWS_AS(make_registration_code(1, ""), Error);
}

TEST_CASE("content digest parsing") {
  CHECK(ContentDigest::parse(std::string(64, 'a')));
  CHECK_FALSE(ContentDigest::parse(std::string(63, 'a')));
  CHECK_FALSE(ContentDigest::parse(std::string(64, 'A')));
  CHECK_FALSE(ContentDigest::parse(std::string(63, 'a') + "g"));
}

TEST_CASE("password hashing") {
  auto stored = crypto::hash_password("correct horse", 1000);
  CHECK(stored.rfind("pbkdf2-sha256$1000$", 0) == 0);
  CHECK(crypto::verify_password("correct horse", stored));
  CHECK_FALSE(crypto::verify_password("correct hors", stored));
  CHECK_FALSE(crypto::verify_password("x", "garbage"));
  CHECK(crypto::hash_password("pw", 1000) != crypto::hash_password("pw", 1000));
}

TEST_CASE("uuids") {
  for (int i = 0; i < 50; ++i) CHECK(is_uuid(crypto::new_uuid()));
  CHECK(is_uuid("00000000-0000-4000-8000-000000000001"));
  CHECK_FALSE(is_uuid("00000000-0000-4000-8000-00000000000"));
  CHECK_FALSE(is_uuid("not-a-uuid"));
}

TEST_CASE("iso8601 round trip") {
  auto t = at("2024-05-06T10:00:00.123Z");
  CHECK(format_iso8601(t) == "2024-05-06T10:00:00.123Z");
  CHECK(to_epoch_ms(t) == 1714989600123);
  CHECK(format_iso8601(at("2024-05-06T12:00:00+02:00")) == "2024-05-06T10:00:00.000Z");
  CHECK_FALSE(parse_iso8601("yesterday"));
  CHECK_FALSE(parse_iso8601("2024-13-01T00:00:00Z"));
}

TEST_CASE("calendar days follow the configured zone") {
  DayCalendar utc("UTC");
  DayCalendar berlin("Europe/Berlin");
  auto t = at("2024-05-06T22:30:00Z");  // already the 7th in Berlin
  CHECK(berlin.day_index(t) == utc.day_index(t) + 1);
  auto [start, end] = berlin.day_bounds(t);
  CHECK(format_iso8601(start) == "2024-05-06T22:00:00.000Z");
  CHECK(format_iso8601(end) == "2024-05-07T22:00:00.000Z");

  // 23-hour day at the spring transition
  auto [s2, e2] = berlin.day_bounds(at("2024-03-31T12:00:00Z"));
  CHECK((e2 - s2) == std::chrono::hours(23));
  CHECK_THROWS_AS(DayCalendar("Mars/Olympus_Mons"), Error);
}

TEST_CASE("popup action codes") {
  CHECK(to_code(PopupAction::Edit) == 0);
  CHECK(to_code(PopupAction::Post) == 1);
  CHECK(to_code(PopupAction::ShareNoIntervention) == 2);
  CHECK(popup_action_from_code(2) == PopupAction::ShareNoIntervention);
  CHECK_FALSE(popup_action_from_code(3));
}

TEST_CASE("event validation") {
  ActivityEvent e;
  e.client_event_id = testing::uuid_n(1);
  e.user_id = 1;
  e.popup_action = PopupAction::ShareNoIntervention;
  e.post_hash = digest_content(1, "a");
  e.image_hash = digest_content(1, "b");
  CHECK_NOTHROW(validate_event(e));
  e.message_id = 3;
  CHECK_THROWS_AS(validate_event(e), Error);
  e.popup_action = PopupAction::Post;
  CHECK_NOTHROW(validate_event(e));
  e.message_id = 27;
  CHECK_THROWS_AS(validate_event(e), Error);
}

TEST_CASE("shipped corpus") {
  const auto& corpus = testing::shipped_corpus();
  CHECK_NOTHROW(validate_corpus(corpus));
  CHECK(corpus.size() == 26);
  std::set<int> cats;
  for (const auto& m : corpus) cats.insert(m.category_id);
  CHECK(cats.size() == 6);
  CHECK(message_categories().size() == 6);
  CHECK(message_categories()[4].name == "location");
}

TEST_CASE("corpus parse errors name the line") {
  std::istringstream in(
      "message_id\tcategory_id\trisk_value\ttext_en\ttext_de\n1\t7\t0.5\tx\ty\n");
  try {
    parse_corpus(in);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream short_corpus(
      "message_id\tcategory_id\trisk_value\ttext_en\ttext_de\n1\t1\t0.5\tx\ty\n");
  CHECK_THROWS_AS(validate_corpus(parse_corpus(short_corpus)), Error);
}

TEST_CASE("reverse coding is an involution on 1..7") {
  for (int v = kLikertMin; v <= kLikertMax; ++v) {
    CHECK(reverse_item(reverse_item(v)) == v);
    CHECK(reverse_item(v) == 8 - v);
  }
  try {
    reverse_item(0, "RSK1");
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("RSK1") != std::string::npos);
  }
}

TEST_CASE("standard scales") {
  const auto& scales = standard_scales();
  REQUIRE(scales.size() == 4);
  CHECK(scales[0].scale_id == ScaleId::RSK);
  CHECK(scales[0].is_reversed("RSK1"));
  CHECK(scales[0].is_reversed("RSK2"));
  CHECK_FALSE(scales[0].is_reversed("RSK3"));
  CHECK(scales[2].item_ids.size() == 11);
  CHECK(scales[3].item_ids.size() == 6);
}
