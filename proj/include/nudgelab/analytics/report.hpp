#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nudgelab/analytics/edit_changes.hpp"
#include "nudgelab/analytics/metrics.hpp"
#include "nudgelab/analytics/statistics.hpp"
#include "nudgelab/analytics/survey_scoring.hpp"
#include "nudgelab/store/export.hpp"

namespace nudgelab::analytics {

struct VariableResult {
  std::string name;   // "#EDITS", "RSK", ...
  std::string label;
  std::optional<stats::GroupSummary> g1;
  std::optional<stats::GroupSummary> g2;
  std::optional<stats::GroupComparison> comparison;
  std::optional<stats::LeveneResult> levene;  // raw-data mode only
};

struct Report {
  std::optional<AggregateCounts> counts;
  int duplicates_removed = 0;
  std::map<ChangeKind, int> edit_outcomes;
  std::vector<VariableResult> variables;
  std::vector<ReliabilityResult> reliability;
  int unmatched_participants = 0;
  double alpha = 0.05;
};

struct ReportOptions {
  stats::TestOptions test;
  MetricsConfig metrics;
  int pairing_window_minutes = 30;
};

// Full pipeline over an events export: drop duplicate client_event_ids,
// per-user metrics, group summaries, Levene, t-tests, and (when responses
// are given) construct scores and reliability. Survey participant ids are
// matched to user ids to find each participant's group.
Report analyze_events(std::span<const ExportRow> rows, std::span<const RosterRow> roster,
                      std::optional<std::span<const SurveyItemResponse>> survey,
                      const ReportOptions& options = {});

// Published-summary mode: variable,group,n,mean,sd rows with groups 1 and 2.
struct SummaryRow {
  std::string variable;
  int group = 1;
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;
};

std::vector<SummaryRow> read_summaries(std::istream& in, const std::string& source);
std::vector<SummaryRow> read_summaries_file(const std::filesystem::path& path);
Report analyze_summaries(std::span<const SummaryRow> rows, const ReportOptions& options = {});

// Deterministic renderings: same report, same bytes.
std::string render_text(const Report& report);
nlohmann::json render_json(const Report& report);

}  // namespace nudgelab::analytics
