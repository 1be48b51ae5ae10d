#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nudgelab/domain/time.hpp"
#include "nudgelab/domain/types.hpp"
#include "nudgelab/engine/policy.hpp"

namespace nudgelab {

enum class TokenState { Pending, ResolvedEdit, ResolvedPost, Expired };

std::string_view to_string(TokenState s);
std::optional<TokenState> parse_token_state(std::string_view text);

struct InterventionToken {
  std::string token;
  UserId user_id = 0;
  std::optional<int> message_id;
  Timestamp issued_at{};
  Timestamp expires_at{};
  TokenState state = TokenState::Pending;
};

enum class DecisionKind { Intervene, Pass };

struct DecisionOutcome {
  DecisionKind kind = DecisionKind::Pass;
  std::optional<InterventionToken> token;
  std::optional<InterventionMessage> message;
};

// One displayed pop-up, as far as budget accounting is concerned.
struct Issuance {
  Timestamp issued_at{};
  std::optional<int> message_id;
};

// Everything decide() needs to know about a user's past pop-ups.
struct IssuanceSummary {
  int issued_today = 0;
  std::optional<Timestamp> last_issued_at;  // latest issuance ever, any day
  std::set<int> shown_today;
  std::int64_t issued_total = 0;
};

// Reference route for the store's interventions_today query.
IssuanceSummary summarize_issuances(std::span<const Issuance> history, Timestamp now,
                                    const DayCalendar& calendar);

// Daily budget and minimum gap, both charged at issuance.
bool policy_allows(const IssuanceSummary& summary, Timestamp now, const PolicyConfig& config);

// V1: always empty (legend-only pop-up). V2: uniform draw from the corpus,
// minus today's shown messages when no_repeat is set.
std::optional<InterventionMessage> select_message(const UserAccount& user,
                                                  std::span<const InterventionMessage> corpus,
                                                  const std::set<int>& shown_today, bool no_repeat,
                                                  std::mt19937_64& rng);

class InterventionEngine {
 public:
  using TokenIdSource = std::function<std::string()>;

  // Throws Error(Configuration) for invalid policies, or when the corpus is
  // too small to honour max_per_day without repeats.
  InterventionEngine(PolicyConfig config, std::vector<InterventionMessage> corpus,
                     TokenIdSource token_ids = {});

  // Pure in (user, now, summary) for a fixed seed: the selection stream is
  // keyed by (seed, user_id, issued_total), not by call order.
  DecisionOutcome decide(const UserAccount& user, Timestamp now,
                         const IssuanceSummary& summary) const;

  const PolicyConfig& config() const { return config_; }
  const DayCalendar& calendar() const { return calendar_; }
  const std::vector<InterventionMessage>& corpus() const { return corpus_; }
  std::uint64_t seed() const { return seed_; }

 private:
  PolicyConfig config_;
  DayCalendar calendar_;
  std::vector<InterventionMessage> corpus_;
  TokenIdSource token_ids_;
  std::uint64_t seed_;
};

enum class ResolveAction { Edit, Post };

PopupAction to_popup_action(ResolveAction a);

// State the token moves to when resolved at `now`. Throws Error(Conflict)
// for an already-resolved token and Error(Expired) for an expired one or
// one whose TTL has lapsed.
TokenState resolve_transition(const InterventionToken& token, ResolveAction action, Timestamp now);

bool is_due_for_expiry(const InterventionToken& token, Timestamp now);

}  // namespace nudgelab
