#include "nudgelab/domain/types.hpp"

#include <algorithm>

#include "nudgelab/domain/error.hpp"

namespace nudgelab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "validation_error";
    case ErrorCode::Authentication: return "authentication_failed";
    case ErrorCode::Authorization: return "forbidden";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Conflict: return "conflict";
    case ErrorCode::Expired: return "token_expired";
    case ErrorCode::Configuration: return "configuration_error";
    case ErrorCode::Degenerate: return "degenerate_input";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Storage: return "storage_unavailable";
  }
  return "unknown";
}

std::string_view to_string(AppVariant v) { return v == AppVariant::V1 ? "V1" : "V2"; }
std::string_view to_string(Language l) { return l == Language::EN ? "EN" : "DE"; }

std::optional<AppVariant> parse_app_variant(std::string_view text) {
  if (text == "V1") return AppVariant::V1;
  if (text == "V2") return AppVariant::V2;
  return std::nullopt;
}

std::optional<Language> parse_language(std::string_view text) {
  if (text == "EN") return Language::EN;
  if (text == "DE") return Language::DE;
  return std::nullopt;
}

int to_code(PopupAction a) { return static_cast<int>(a); }

std::optional<PopupAction> popup_action_from_code(int code) {
  switch (code) {
    case 0: return PopupAction::Edit;
    case 1: return PopupAction::Post;
    case 2: return PopupAction::ShareNoIntervention;
    default: return std::nullopt;
  }
}

std::string_view describe(PopupAction a) {
  switch (a) {
    case PopupAction::Edit: return "The user clicked \"edit\" after receiving an intervention";
    case PopupAction::Post: return "The user clicked \"post\" after receiving an intervention";
    case PopupAction::ShareNoIntervention:
      return "The user clicked \"SHARE!\" but did not receive an intervention afterwards";
  }
  return "";
}

bool ContentDigest::is_valid(std::string_view hex) {
  return hex.size() == 64 && std::all_of(hex.begin(), hex.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::optional<ContentDigest> ContentDigest::parse(std::string_view hex) {
  if (!is_valid(hex)) return std::nullopt;
  return ContentDigest(std::string(hex));
}

bool is_uuid(std::string_view text) {
  if (text.size() != 36) return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (c != '-') return false;
    } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'))) {
      return false;
    }
  }
  return true;
}

void validate_event(const ActivityEvent& e) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::Validation, "event " + e.client_event_id + ": " + what);
  };
  if (!is_uuid(e.client_event_id)) fail("client_event_id is not an RFC 4122 identifier");
  if (e.user_id <= 0) fail("user_id must be positive");
  if (e.post_length < 0) fail("post_length must be >= 0");
  if (!ContentDigest::is_valid(e.post_hash.hex())) fail("post_hash must be 64 lowercase hex");
  if (!ContentDigest::is_valid(e.image_hash.hex())) fail("image_hash must be 64 lowercase hex");
  if (e.message_id) {
    if (e.popup_action == PopupAction::ShareNoIntervention) {
      fail("message_id must be absent for popup_action 2");
    }
    if (*e.message_id < 1 || *e.message_id > 26) fail("message_id out of range 1..26");
  }
}

}  // namespace nudgelab
