#include "nudgelab/store/audit.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include <absl/time/time.h>

namespace nudgelab {
namespace {

std::vector<Violation> event_checks(std::span<const ExportRow> rows) {
  std::vector<Violation> out;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    const auto& e = r.event;
    if (!seen.insert(e.client_event_id).second) {
      out.push_back({ViolationKind::DuplicateClientEventId, e.user_id,
                     {std::to_string(e.event_id)}, "client_event_id " + e.client_event_id});
    }
    if (e.popup_action == PopupAction::ShareNoIntervention && e.message_id) {
      out.push_back({ViolationKind::ShareWithMessage, e.user_id, {std::to_string(e.event_id)},
                     "action 2 event carries message " + std::to_string(*e.message_id)});
    }
  }
  return out;
}

// Local date of the record's calendar day, e.g. "2024-05-06".
std::string day_label(const AuditRecord& r, const DayCalendar& calendar) {
  absl::TimeZone zone;
  absl::LoadTimeZone(calendar.zone_name(), &zone);
  return absl::FormatTime("%Y-%m-%d", absl::FromUnixMillis(to_epoch_ms(r.shown_at)), zone);
}

}  // namespace

std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::DailyBudget: return "daily_budget";
    case ViolationKind::MinimumGap: return "minimum_gap";
    case ViolationKind::SameDayRepeat: return "same_day_repeat";
    case ViolationKind::VariantMessageMismatch: return "variant_message_mismatch";
    case ViolationKind::ShareWithMessage: return "share_with_message";
    case ViolationKind::DuplicateClientEventId: return "duplicate_client_event_id";
  }
  return "";
}

std::vector<Violation> audit_interventions(std::vector<AuditRecord> records,
                                           const PolicyConfig& config) {
  DayCalendar calendar(config.day_boundary_timezone);
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user_id, a.shown_at) < std::tie(b.user_id, b.shown_at);
  });

  std::vector<Violation> out;
  const auto gap = std::chrono::minutes(config.min_gap_minutes);

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if ((r.app_variant == AppVariant::V1) == r.message_id.has_value()) {
      out.push_back({ViolationKind::VariantMessageMismatch, r.user_id, {r.ref},
                     r.app_variant == AppVariant::V1 ? "V1 pop-up carries a message"
                                                     : "V2 pop-up without a message"});
    }
    if (i > 0 && records[i - 1].user_id == r.user_id && r.shown_at - records[i - 1].shown_at < gap) {
      auto seconds = std::chrono::duration_cast<std::chrono::seconds>(r.shown_at -
                                                                        records[i - 1].shown_at);
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.1f min apart", static_cast<double>(seconds.count()) / 60);
      out.push_back({ViolationKind::MinimumGap, r.user_id, {records[i - 1].ref, r.ref}, buf});
    }
  }

  // Per user-day: budget and (V2) repeats.
  std::map<std::pair<UserId, std::int64_t>, std::vector<const AuditRecord*>> days;
  for (const auto& r : records) days[{r.user_id, calendar.day_index(r.shown_at)}].push_back(&r);
  for (const auto& [key, day] : days) {
    if (static_cast<int>(day.size()) > config.max_per_day) {
      Violation v{ViolationKind::DailyBudget, key.first, {},
                  std::to_string(day.size()) + " interventions on " + day_label(*day.front(), calendar)};
      for (const auto* r : day) v.refs.push_back(r->ref);
      out.push_back(std::move(v));
    }
    if (!config.no_repeat_same_day) continue;
    std::map<int, std::vector<std::string>> by_message;
    for (const auto* r : day) {
      if (r->app_variant == AppVariant::V2 && r->message_id) {
        by_message[*r->message_id].push_back(r->ref);
      }
    }
    for (auto& [message, refs] : by_message) {
      if (refs.size() > 1) {
        out.push_back({ViolationKind::SameDayRepeat, key.first, std::move(refs),
                       "message " + std::to_string(message) + " repeated on " +
                           day_label(*day.front(), calendar)});
      }
    }
  }
  return out;
}

std::vector<Violation> audit_store(const EventStore& store, const PolicyConfig& config) {
  std::map<UserId, AppVariant> variants;
  for (const auto& u : store.users()) variants[u.user_id] = u.app_variant;

  std::vector<AuditRecord> records;
  for (const auto& t : store.tokens()) {
    records.push_back({t.user_id, variants[t.user_id], t.issued_at, t.message_id, t.token});
  }
  auto out = audit_interventions(std::move(records), config);
  auto rows = store.export_rows();
  auto more = event_checks(rows);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

std::vector<Violation> audit_export(std::span<const ExportRow> rows, const PolicyConfig& config) {
  std::vector<AuditRecord> records;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (r.event.popup_action == PopupAction::ShareNoIntervention) continue;
    // Resubmitted rows are reported once, as duplicates, not as pop-ups.
    if (!seen.insert(r.event.client_event_id).second) continue;
    records.push_back({r.event.user_id, r.app_variant, r.event.timestamp, r.event.message_id,
                       std::to_string(r.event.event_id)});
  }
  auto out = audit_interventions(std::move(records), config);
  auto more = event_checks(rows);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

std::string describe(const Violation& v) {
  std::string refs;
  for (const auto& r : v.refs) refs += (refs.empty() ? "" : " ") + r;
  return std::string(to_string(v.kind)) + " user=" + std::to_string(v.user_id) + " refs=[" + refs +
         "] " + v.detail;
}

nlohmann::json to_json(const std::vector<Violation>& violations) {
  auto arr = nlohmann::json::array();
  for (const auto& v : violations) {
    arr.push_back({{"kind", to_string(v.kind)},
                   {"user_id", v.user_id},
                   {"refs", v.refs},
                   {"detail", v.detail}});
  }
  return arr;
}

}  // namespace nudgelab
