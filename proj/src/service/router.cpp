#include "nudgelab/service/router.hpp"

#include <set>

#include "nudgelab/domain/corpus.hpp"
#include "nudgelab/domain/error.hpp"

namespace nudgelab {
namespace {

using nlohmann::json;

struct FieldSpec {
  std::set<std::string> required;
  std::set<std::string> optional;
};

void check_fields(const json& body, const FieldSpec& spec) {
  if (!body.is_object()) throw Error(ErrorCode::Validation, "request body must be a JSON object");
  for (const auto& [key, _] : body.items()) {
    if (!spec.required.contains(key) && !spec.optional.contains(key)) {
      throw Error(ErrorCode::Validation, "unknown field: " + key);
    }
  }
  for (const auto& key : spec.required) {
    if (!body.contains(key)) throw Error(ErrorCode::Validation, "missing field: " + key);
  }
}

std::string get_string(const json& body, const char* key) {
  const auto& v = body.at(key);
  if (!v.is_string()) throw Error(ErrorCode::Validation, std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::int64_t get_int(const json& body, const char* key) {
  const auto& v = body.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::Validation, std::string(key) + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::optional<Timestamp> get_timestamp(const json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  auto t = parse_iso8601(get_string(body, key));
  if (!t) throw Error(ErrorCode::Validation, std::string(key) + " must be ISO-8601");
  return t;
}

ContentFields get_content(const json& body) {
  return {get_int(body, "post_length"), get_string(body, "post_hash"),
          get_string(body, "image_hash")};
}

json envelope() { return json{{"protocol_version", kProtocolVersion}}; }

json share_body(const ShareAttemptResponse& r) {
  json out = envelope();
  out["legend"] = kLegend;
  if (r.decision == DecisionKind::Pass) {
    out["decision"] = "pass";
    out["event_id"] = *r.event_id;
    out["next_screen"] = "post_type_selection";
    return out;
  }
  out["decision"] = "intervene";
  out["intervention_token"] = *r.intervention_token;
  out["expires_at"] = format_iso8601(*r.token_expires_at);
  if (r.message_id) {
    out["message_id"] = *r.message_id;
    out["message_text"] = r.message_text.value_or("");
  }
  return out;
}

json resolve_body(const ResolveResponse& r) {
  json out = envelope();
  out["event_id"] = r.event_id;
  out["popup_action"] = to_code(r.popup_action);
  out["message_id"] = r.message_id ? json(*r.message_id) : json(nullptr);
  if (r.popup_action == PopupAction::Edit) {
    out["next_screen"] = "compose";
  } else {
    out["next_screen"] = "post_type_selection";
    out["post_types"] = {"feed", "story", "direct_message"};
  }
  return out;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return 400;
    case ErrorCode::Authentication: return 401;
    case ErrorCode::Authorization: return 403;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Conflict: return 409;
    case ErrorCode::Expired: return 410;
    case ErrorCode::Degenerate: return 422;
    case ErrorCode::Configuration: return 500;
    case ErrorCode::Io: return 500;
    case ErrorCode::Storage: return 503;
  }
  return 500;
}

json error_body(ErrorCode code, std::string_view message) {
  json out = envelope();
  out["error_code"] = to_string(code);
  out["message"] = message;
  return out;
}

HttpReply Router::dispatch(std::string_view method, std::string_view path, std::string_view body) {
  try {
    json request = json::object();
    if (method == "POST") {
      request = json::parse(body.begin(), body.end(), nullptr, /*allow_exceptions=*/false);
      if (request.is_discarded()) throw Error(ErrorCode::Validation, "malformed JSON body");
    }
    return {200, handle(method, path, request).dump()};
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e.code(), e.what()).dump()};
  } catch (const json::exception& e) {
    return {400, error_body(ErrorCode::Validation, e.what()).dump()};
  } catch (const std::exception& e) {
    return {500, error_body(ErrorCode::Storage, e.what()).dump()};
  }
}

json Router::handle(std::string_view method, std::string_view path, const json& req) {
  if (path == "/api/v1/health") {
    if (method != "GET") throw Error(ErrorCode::NotFound, "use GET /api/v1/health");
    json out = envelope();
    out["status"] = "ok";
    out["corpus_size"] = service_.engine().corpus().size();
    return out;
  }
  if (method != "POST") throw Error(ErrorCode::NotFound, "no such endpoint");

  if (path == "/api/v1/register") {
    check_fields(req, {{"username", "password", "app_variant", "language"}, {"client_timestamp"}});
    RegisterRequest r;
    r.username = get_string(req, "username");
    r.password = get_string(req, "password");
    auto variant = parse_app_variant(get_string(req, "app_variant"));
    if (!variant) throw Error(ErrorCode::Validation, "app_variant must be V1 or V2");
    auto language = parse_language(get_string(req, "language"));
    if (!language) throw Error(ErrorCode::Validation, "language must be EN or DE");
    r.app_variant = *variant;
    r.language = *language;
    r.client_timestamp = get_timestamp(req, "client_timestamp");
    auto res = service_.register_user(r);
    json out = envelope();
    out["user_id"] = res.user_id;
    out["registration_code"] = res.registration_code;
    return out;
  }
  if (path == "/api/v1/login") {
    check_fields(req, {{"username", "password"}, {"client_timestamp"}});
    auto res = service_.login(get_string(req, "username"), get_string(req, "password"),
                              get_timestamp(req, "client_timestamp"));
    json out = envelope();
    out["session_token"] = res.session_token;
    out["expires_at"] = format_iso8601(res.expires_at);
    return out;
  }
  if (path == "/api/v1/logout") {
    check_fields(req, {{"session_token"}, {}});
    service_.logout(get_string(req, "session_token"));
    json out = envelope();
    out["status"] = "logged_out";
    return out;
  }
  if (path == "/api/v1/share-attempt") {
    check_fields(req, {{"session_token", "client_event_id", "post_length", "post_hash",
                        "image_hash"},
                       {"client_timestamp"}});
    ShareAttemptRequest r;
    r.session_token = get_string(req, "session_token");
    r.client_event_id = get_string(req, "client_event_id");
    r.content = get_content(req);
    r.client_timestamp = get_timestamp(req, "client_timestamp");
    return share_body(service_.share_attempt(r));
  }
  if (path == "/api/v1/resolve") {
    check_fields(req, {{"session_token", "client_event_id", "intervention_token", "action",
                        "post_length", "post_hash", "image_hash"},
                       {"client_timestamp"}});
    ResolveRequest r;
    r.session_token = get_string(req, "session_token");
    r.client_event_id = get_string(req, "client_event_id");
    r.intervention_token = get_string(req, "intervention_token");
    auto action = get_string(req, "action");
    if (action == "edit") {
      r.action = ResolveAction::Edit;
    } else if (action == "post") {
      r.action = ResolveAction::Post;
    } else {
      throw Error(ErrorCode::Validation, "action must be \"edit\" or \"post\"");
    }
    r.content = get_content(req);
    r.client_timestamp = get_timestamp(req, "client_timestamp");
    return resolve_body(service_.resolve(r));
  }
  throw Error(ErrorCode::NotFound, "no such endpoint");
}

}  // namespace nudgelab
