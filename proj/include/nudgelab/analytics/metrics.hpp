#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nudgelab/domain/types.hpp"
#include "nudgelab/store/export.hpp"

namespace nudgelab::analytics {

enum class Group { G1, G2 };

inline Group group_of(AppVariant v) { return v == AppVariant::V1 ? Group::G1 : Group::G2; }
inline std::string_view to_string(Group g) { return g == Group::G1 ? "G1" : "G2"; }

struct MetricsConfig {
  int experiment_days = 7;
  int max_per_day = 5;
};

struct UserMetrics {
  UserId user_id = 0;
  Group group = Group::G1;
  int edits = 0;         // action 0
  int posts = 0;         // action 1
  int shares = 0;        // action 2
  int publications = 0;  // posts + shares
  int interventions_received = 0;  // edits + posts
  double exposure_ratio = 0.0;     // interventions / (days * max_per_day)
};

// Events of one deduplicated user. Throws Error(Validation) if any event
// belongs to another user.
UserMetrics compute_user_metrics(UserId user, AppVariant variant,
                                 std::span<const ActivityEvent> events,
                                 const MetricsConfig& config = {});

// One record per user, ascending user_id. With a roster, registered users
// without events appear with zero counts. Throws Error(Validation) on
// duplicate client_event_ids (the export should already be deduplicated)
// or a user whose variant differs between rows.
std::vector<UserMetrics> collect_user_metrics(std::span<const ExportRow> rows,
                                              std::span<const RosterRow> roster = {},
                                              const MetricsConfig& config = {});

struct AggregateCounts {
  int events = 0;
  int edits = 0;
  int posts = 0;
  int shares = 0;
  int publications = 0;
  int interventions_g1 = 0;
  int interventions_g2 = 0;
  int users_g1 = 0;
  int users_g2 = 0;
};

AggregateCounts aggregate(std::span<const UserMetrics> metrics);

}  // namespace nudgelab::analytics
