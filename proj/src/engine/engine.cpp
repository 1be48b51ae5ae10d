#include "nudgelab/engine/engine.hpp"

#include <algorithm>

#include "nudgelab/domain/crypto.hpp"
#include "nudgelab/domain/error.hpp"

namespace nudgelab {

std::string_view to_string(TokenState s) {
  switch (s) {
    case TokenState::Pending: return "PENDING";
    case TokenState::ResolvedEdit: return "RESOLVED_EDIT";
    case TokenState::ResolvedPost: return "RESOLVED_POST";
    case TokenState::Expired: return "EXPIRED";
  }
  return "";
}

std::optional<TokenState> parse_token_state(std::string_view text) {
  for (auto s : {TokenState::Pending, TokenState::ResolvedEdit, TokenState::ResolvedPost,
                 TokenState::Expired}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

IssuanceSummary summarize_issuances(std::span<const Issuance> history, Timestamp now,
                                    const DayCalendar& calendar) {
  IssuanceSummary s;
  const auto today = calendar.day_index(now);
  for (const auto& i : history) {
    ++s.issued_total;
    if (!s.last_issued_at || i.issued_at > *s.last_issued_at) s.last_issued_at = i.issued_at;
    if (calendar.day_index(i.issued_at) == today) {
      ++s.issued_today;
      if (i.message_id) s.shown_today.insert(*i.message_id);
    }
  }
  return s;
}

bool policy_allows(const IssuanceSummary& summary, Timestamp now, const PolicyConfig& config) {
  if (summary.issued_today >= config.max_per_day) return false;
  if (summary.last_issued_at &&
      now - *summary.last_issued_at < std::chrono::minutes(config.min_gap_minutes)) {
    return false;
  }
  return true;
}

std::optional<InterventionMessage> select_message(const UserAccount& user,
                                                  std::span<const InterventionMessage> corpus,
                                                  const std::set<int>& shown_today, bool no_repeat,
                                                  std::mt19937_64& rng) {
  if (user.app_variant == AppVariant::V1) return std::nullopt;
  if (corpus.empty()) throw Error(ErrorCode::Configuration, "empty message corpus for V2 user");

  std::vector<const InterventionMessage*> eligible;
  for (const auto& m : corpus) {
    if (!no_repeat || !shown_today.contains(m.message_id)) eligible.push_back(&m);
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::Configuration, "no eligible message left for today");
  }
  std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
  return *eligible[pick(rng)];
}

InterventionEngine::InterventionEngine(PolicyConfig config,
                                       std::vector<InterventionMessage> corpus,
                                       TokenIdSource token_ids)
    : config_(std::move(config)),
      calendar_(config_.day_boundary_timezone),
      corpus_(std::move(corpus)),
      token_ids_(token_ids ? std::move(token_ids) : TokenIdSource(crypto::new_uuid)),
      seed_(config_.rng_seed ? *config_.rng_seed : std::random_device{}()) {
  config_.validate();
  std::sort(corpus_.begin(), corpus_.end(),
            [](const auto& a, const auto& b) { return a.message_id < b.message_id; });
  if (!corpus_.empty() && config_.no_repeat_same_day &&
      corpus_.size() < static_cast<std::size_t>(config_.max_per_day)) {
    throw Error(ErrorCode::Configuration,
                "corpus smaller than max_per_day cannot honour the no-repeat rule");
  }
}

DecisionOutcome InterventionEngine::decide(const UserAccount& user, Timestamp now,
                                           const IssuanceSummary& summary) const {
  DecisionOutcome out;
  if (!policy_allows(summary, now, config_)) return out;

  auto total = static_cast<std::uint64_t>(summary.issued_total);
  auto uid = static_cast<std::uint64_t>(user.user_id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(uid), static_cast<std::uint32_t>(uid >> 32),
                    static_cast<std::uint32_t>(total), static_cast<std::uint32_t>(total >> 32)};
  std::mt19937_64 rng(seq);

  out.kind = DecisionKind::Intervene;
  out.message = select_message(user, corpus_, summary.shown_today, config_.no_repeat_same_day, rng);

  InterventionToken token;
  token.token = token_ids_();
  token.user_id = user.user_id;
  if (out.message) token.message_id = out.message->message_id;
  token.issued_at = now;
  token.expires_at = now + std::chrono::minutes(config_.token_ttl_minutes);
  token.state = TokenState::Pending;
  out.token = std::move(token);
  return out;
}

PopupAction to_popup_action(ResolveAction a) {
  return a == ResolveAction::Edit ? PopupAction::Edit : PopupAction::Post;
}

TokenState resolve_transition(const InterventionToken& token, ResolveAction action,
                              Timestamp now) {
  switch (token.state) {
    case TokenState::ResolvedEdit:
    case TokenState::ResolvedPost:
      throw Error(ErrorCode::Conflict, "intervention token already resolved");
    case TokenState::Expired:
      throw Error(ErrorCode::Expired, "intervention token expired");
    case TokenState::Pending:
      break;
  }
  if (now >= token.expires_at) throw Error(ErrorCode::Expired, "intervention token expired");
  return action == ResolveAction::Edit ? TokenState::ResolvedEdit : TokenState::ResolvedPost;
}

bool is_due_for_expiry(const InterventionToken& token, Timestamp now) {
  return token.state == TokenState::Pending && token.expires_at <= now;
}

}  // namespace nudgelab
