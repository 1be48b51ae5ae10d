#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nudgelab/domain/time.hpp"

namespace nudgelab {

using UserId = std::int64_t;
using EventId = std::int64_t;

enum class AppVariant { V1, V2 };
enum class Language { EN, DE };

std::string_view to_string(AppVariant v);
std::string_view to_string(Language l);
std::optional<AppVariant> parse_app_variant(std::string_view text);
std::optional<Language> parse_language(std::string_view text);

// Codes stored in user_activity.popup_action.
enum class PopupAction : int {
  Edit = 0,
  Post = 1,
  ShareNoIntervention = 2,
};

int to_code(PopupAction a);
std::optional<PopupAction> popup_action_from_code(int code);
std::string_view describe(PopupAction a);

// 64 lowercase hex characters. Construct through parse() or digest_content().
class ContentDigest {
 public:
  ContentDigest() = default;

  static std::optional<ContentDigest> parse(std::string_view hex);
  static bool is_valid(std::string_view hex);

  const std::string& hex() const { return hex_; }
  bool empty() const { return hex_.empty(); }

  friend bool operator==(const ContentDigest&, const ContentDigest&) = default;

 private:
  explicit ContentDigest(std::string hex) : hex_(std::move(hex)) {}
  std::string hex_;
};

struct UserAccount {
  UserId user_id = 0;
  std::string username;
  std::string password_digest;
  AppVariant app_variant = AppVariant::V1;
  Language language = Language::EN;
  std::string registration_code;
  Timestamp created_at{};
};

struct MessageCategory {
  int category_id = 0;
  std::string name;
};

struct InterventionMessage {
  int message_id = 0;
  int category_id = 0;
  double risk_value = 0.0;
  std::string text_en;
  std::string text_de;

  const std::string& text(Language lang) const {
    return lang == Language::DE ? text_de : text_en;
  }
};

struct ActivityEvent {
  EventId event_id = 0;
  std::string client_event_id;
  UserId user_id = 0;
  PopupAction popup_action = PopupAction::ShareNoIntervention;
  std::optional<int> message_id;
  std::int64_t post_length = 0;
  ContentDigest post_hash;
  ContentDigest image_hash;
  Timestamp timestamp{};

  friend bool operator==(const ActivityEvent&, const ActivityEvent&) = default;
};

// Throws Error(Validation) when the event violates its own invariants
// (message_id with action 2, out-of-range ids, malformed digests, ...).
void validate_event(const ActivityEvent& e);

// RFC 4122 textual form, lowercase or uppercase hex accepted.
bool is_uuid(std::string_view text);

}  // namespace nudgelab
