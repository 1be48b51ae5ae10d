#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nudgelab/domain/types.hpp"
#include "nudgelab/engine/policy.hpp"
#include "nudgelab/store/event_store.hpp"
#include "nudgelab/store/export.hpp"

namespace nudgelab {

// One displayed pop-up as seen by the auditor. `ref` names it in reports:
// the token for store audits, the event id for export audits.
struct AuditRecord {
  UserId user_id = 0;
  AppVariant app_variant = AppVariant::V1;
  Timestamp shown_at{};
  std::optional<int> message_id;
  std::string ref;
};

enum class ViolationKind {
  DailyBudget,
  MinimumGap,
  SameDayRepeat,
  VariantMessageMismatch,
  ShareWithMessage,
  DuplicateClientEventId,
};

std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  UserId user_id = 0;
  std::vector<std::string> refs;
  std::string detail;
};

// Re-checks budget, gap and no-repeat over a full history.
std::vector<Violation> audit_interventions(std::vector<AuditRecord> records,
                                           const PolicyConfig& config);

// Uses token issuance times, which is exact, plus event-level checks.
std::vector<Violation> audit_store(const EventStore& store, const PolicyConfig& config);

// Uses 0/1 event timestamps as display times. Exact when pop-ups are
// resolved at the instant they are shown; otherwise the gap check sees
// resolution times and can report gaps the service never allowed.
std::vector<Violation> audit_export(std::span<const ExportRow> rows, const PolicyConfig& config);

std::string describe(const Violation& v);
nlohmann::json to_json(const std::vector<Violation>& violations);

}  // namespace nudgelab
