#include "nudgelab/analytics/metrics.hpp"

#include <map>
#include <set>

#include "nudgelab/domain/error.hpp"

namespace nudgelab::analytics {

UserMetrics compute_user_metrics(UserId user, AppVariant variant,
                                 std::span<const ActivityEvent> events,
                                 const MetricsConfig& config) {
  UserMetrics m;
  m.user_id = user;
  m.group = group_of(variant);
  for (const auto& e : events) {
    if (e.user_id != user) {
      throw Error(ErrorCode::Validation, "metrics input mixes users " + std::to_string(user) +
                                             " and " + std::to_string(e.user_id));
    }
    switch (e.popup_action) {
      case PopupAction::Edit: ++m.edits; break;
      case PopupAction::Post: ++m.posts; break;
      case PopupAction::ShareNoIntervention: ++m.shares; break;
    }
  }
  m.publications = m.posts + m.shares;
  m.interventions_received = m.edits + m.posts;
  const int ceiling = config.experiment_days * config.max_per_day;
  m.exposure_ratio = ceiling > 0 ? static_cast<double>(m.interventions_received) / ceiling : 0.0;
  return m;
}

std::vector<UserMetrics> collect_user_metrics(std::span<const ExportRow> rows,
                                              std::span<const RosterRow> roster,
                                              const MetricsConfig& config) {
  std::map<UserId, AppVariant> variants;
  std::map<UserId, std::vector<ActivityEvent>> by_user;
  std::set<std::string> seen;

  for (const auto& r : roster) {
    variants[r.user_id] = r.app_variant;
    by_user[r.user_id];
  }
  for (const auto& r : rows) {
    if (!seen.insert(r.event.client_event_id).second) {
      throw Error(ErrorCode::Validation,
                  "duplicate client_event_id in input: " + r.event.client_event_id);
    }
    auto [it, inserted] = variants.emplace(r.event.user_id, r.app_variant);
    if (!inserted && it->second != r.app_variant) {
      throw Error(ErrorCode::Validation,
                  "user " + std::to_string(r.event.user_id) + " appears with two app variants");
    }
    by_user[r.event.user_id].push_back(r.event);
  }

  std::vector<UserMetrics> out;
  for (const auto& [user, events] : by_user) {
    out.push_back(compute_user_metrics(user, variants.at(user), events, config));
  }
  return out;
}

AggregateCounts aggregate(std::span<const UserMetrics> metrics) {
  AggregateCounts c;
  for (const auto& m : metrics) {
    c.edits += m.edits;
    c.posts += m.posts;
    c.shares += m.shares;
    c.publications += m.publications;
    c.events += m.edits + m.posts + m.shares;
    if (m.group == Group::G1) {
      c.interventions_g1 += m.interventions_received;
      ++c.users_g1;
    } else {
      c.interventions_g2 += m.interventions_received;
      ++c.users_g2;
    }
  }
  return c;
}

}  // namespace nudgelab::analytics
