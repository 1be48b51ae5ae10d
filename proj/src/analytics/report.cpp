#include "nudgelab/analytics/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "nudgelab/domain/error.hpp"

namespace nudgelab::analytics {
namespace {

const std::vector<std::pair<std::string, std::string>>& variable_labels() {
  static const std::vector<std::pair<std::string, std::string>> labels = {
      {"#EDITS", "Number of edits after intervention"},
      {"#POSTS", "Number of posts after intervention"},
      {"#SHARES", "Total number of shares"},
      {"#PUBLICATIONS", "Total number of publications"},
      {"RSK", "Perceived Risk"},
      {"CTRL", "Perceived Control"},
      {"BEN", "Perceived Benefits"},
      {"EIPC", "External Information Privacy Concerns"},
  };
  return labels;
}

std::string label_for(const std::string& name) {
  for (const auto& [n, l] : variable_labels()) {
    if (n == name) return l;
  }
  return name;
}

int order_of(const std::string& name) {
  const auto& labels = variable_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].first == name) return static_cast<int>(i);
  }
  return static_cast<int>(labels.size());
}

void compare(VariableResult& v, const ReportOptions& options) {
  if (!v.g1 || !v.g2) return;
  v.comparison = stats::pooled_t_test(*v.g1, *v.g2, options.test);
}

VariableResult from_values(const std::string& name, const std::vector<double>& g1,
                           const std::vector<double>& g2, const ReportOptions& options) {
  VariableResult v{name, label_for(name), {}, {}, {}, {}};
  if (g1.size() >= 2) v.g1 = stats::summarize(g1);
  if (g2.size() >= 2) v.g2 = stats::summarize(g2);
  if (v.g1 && v.g2) {
    std::vector<std::vector<double>> groups{g1, g2};
    v.levene = stats::levene_test(groups);
    compare(v, options);
  }
  return v;
}

std::string f3(double x) { return fmt::format("{:.3f}", x); }

}  // namespace

Report analyze_events(std::span<const ExportRow> rows, std::span<const RosterRow> roster,
                      std::optional<std::span<const SurveyItemResponse>> survey,
                      const ReportOptions& options) {
  Report report;
  report.alpha = options.test.alpha;

  std::vector<ExportRow> unique;
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (seen.insert(r.event.client_event_id).second) {
      unique.push_back(r);
    } else {
      ++report.duplicates_removed;
    }
  }

  auto metrics = collect_user_metrics(unique, roster, options.metrics);
  report.counts = aggregate(metrics);

  std::map<UserId, std::vector<ActivityEvent>> by_user;
  for (const auto& r : unique) by_user[r.event.user_id].push_back(r.event);
  for (auto& [user, events] : by_user) {
    std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
      return std::tie(a.timestamp, a.event_id) < std::tie(b.timestamp, b.event_id);
    });
    for (const auto& o : detect_edit_changes(events, options.pairing_window_minutes)) {
      ++report.edit_outcomes[o.change_kind];
    }
  }

  auto split = [&](auto field) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& m : metrics) {
      (m.group == Group::G1 ? out.first : out.second).push_back(static_cast<double>(m.*field));
    }
    return out;
  };
  auto add = [&](const std::string& name, auto field) {
    auto [g1, g2] = split(field);
    report.variables.push_back(from_values(name, g1, g2, options));
  };
  add("#EDITS", &UserMetrics::edits);
  add("#POSTS", &UserMetrics::posts);
  add("#SHARES", &UserMetrics::shares);
  add("#PUBLICATIONS", &UserMetrics::publications);

  if (survey) {
    std::map<std::string, Group> groups;
    for (const auto& m : metrics) groups[std::to_string(m.user_id)] = m.group;

    auto scored = score_survey(*survey, standard_scales());
    report.reliability = scored.reliability;
    std::set<std::string> unmatched;
    for (const auto& scale : standard_scales()) {
      std::vector<double> g1, g2;
      for (const auto& s : scored.scores) {
        if (s.scale_id != scale.scale_id) continue;
        auto it = groups.find(s.participant_id);
        if (it == groups.end()) {
          unmatched.insert(s.participant_id);
          continue;
        }
        (it->second == Group::G1 ? g1 : g2).push_back(s.score);
      }
      report.variables.push_back(
          from_values(std::string(to_string(scale.scale_id)), g1, g2, options));
    }
    report.unmatched_participants = static_cast<int>(unmatched.size());
  }
  return report;
}

std::vector<SummaryRow> read_summaries(std::istream& in, const std::string& source) {
  std::vector<SummaryRow> out;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // no comment syntax: variable names start with '#'
    auto where = source + ":" + std::to_string(line_no);
    if (!header) {
      if (line != "variable,group,n,mean,sd") {
        throw Error(ErrorCode::Validation, where + ": expected header variable,group,n,mean,sd");
      }
      header = true;
      continue;
    }
    auto f = split_fields(line);
    if (f.size() != 5) throw Error(ErrorCode::Validation, where + ": expected 5 fields");
    SummaryRow r;
    r.variable = f[0];
    auto num = [&](const std::string& text, auto& out_value, std::string_view field) {
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out_value);
      if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) {
        throw Error(ErrorCode::Validation,
                    where + ": field '" + std::string(field) + "' is not a number");
      }
    };
    num(f[1], r.group, "group");
    num(f[2], r.n, "n");
    num(f[3], r.mean, "mean");
    num(f[4], r.sd, "sd");
    if (r.group != 1 && r.group != 2) {
      throw Error(ErrorCode::Validation, where + ": field 'group' must be 1 or 2");
    }
    if (r.n < 2) throw Error(ErrorCode::Validation, where + ": field 'n' must be >= 2");
    if (r.sd < 0) throw Error(ErrorCode::Validation, where + ": field 'sd' must be >= 0");
    out.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorCode::Validation, source + ": empty file, expected header");
  return out;
}

std::vector<SummaryRow> read_summaries_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_summaries(in, path.string());
}

Report analyze_summaries(std::span<const SummaryRow> rows, const ReportOptions& options) {
  Report report;
  report.alpha = options.test.alpha;
  std::map<std::string, VariableResult> vars;
  for (const auto& r : rows) {
    auto& v = vars[r.variable];
    v.name = r.variable;
    v.label = label_for(r.variable);
    auto& slot = r.group == 1 ? v.g1 : v.g2;
    if (slot) throw Error(ErrorCode::Validation, "duplicate summary row for " + r.variable);
    slot = stats::summary_from_moments(r.n, r.mean, r.sd);
  }
  for (auto& [name, v] : vars) {
    compare(v, options);
    report.variables.push_back(std::move(v));
  }
  std::stable_sort(report.variables.begin(), report.variables.end(),
                   [](const auto& a, const auto& b) {
                     return std::make_pair(order_of(a.name), a.name) <
                            std::make_pair(order_of(b.name), b.name);
                   });
  return report;
}

std::string render_text(const Report& r) {
  std::string out;
  auto line = [&out](std::string s) {
    out += s;
    out += '\n';
  };

  line("Self-disclosure analysis report");
  line("===============================");
  line("");

  if (r.counts) {
    const auto& c = *r.counts;
    line("Event totals");
    line(fmt::format("  events            {:>6}", c.events));
    line(fmt::format("  #EDITS            {:>6}", c.edits));
    line(fmt::format("  #POSTS            {:>6}", c.posts));
    line(fmt::format("  #SHARES           {:>6}", c.shares));
    line(fmt::format("  #PUBLICATIONS     {:>6}", c.publications));
    line(fmt::format("  interventions G1  {:>6}  (users {})", c.interventions_g1, c.users_g1));
    line(fmt::format("  interventions G2  {:>6}  (users {})", c.interventions_g2, c.users_g2));
    line(fmt::format("  duplicates removed {:>5}", r.duplicates_removed));
    line("");
    line("Edit outcomes");
    for (auto k : {ChangeKind::CaptionChanged, ChangeKind::ImageChanged, ChangeKind::BothChanged,
                   ChangeKind::NoChange, ChangeKind::Abandoned}) {
      auto it = r.edit_outcomes.find(k);
      line(fmt::format("  {:<16} {:>6}", to_string(k), it == r.edit_outcomes.end() ? 0 : it->second));
    }
    line("");
  }

  line("Descriptive group statistics");
  line(fmt::format("{:<15} {:>5} {:>4} {:>8} {:>8} {:>8}", "Variable", "Group", "N", "Mean", "SD",
                   "SE"));
  for (const auto& v : r.variables) {
    int g = 1;
    for (const auto* s : {&v.g1, &v.g2}) {
      if (*s) {
        line(fmt::format("{:<15} {:>5} {:>4} {:>8} {:>8} {:>8}", v.name, g, (*s)->n,
                         f3((*s)->mean), f3((*s)->sd), f3((*s)->se)));
      } else {
        line(fmt::format("{:<15} {:>5} {:>4} {:>8} {:>8} {:>8}", v.name, g, "-", "-", "-", "-"));
      }
      ++g;
    }
  }
  line("");

  line("Independent samples t-test (equal variances assumed)");
  line(fmt::format("{:<15} {:>8} {:>5} {:>8} {:>10} {:>8} {:>20} {:>9} {:>17}", "Variable", "t",
                   "d.f.", "Sig.", "Mean diff.", "SE_DM", "95% CI", "Cohen's d", "Levene W (p)"));
  for (const auto& v : r.variables) {
    if (!v.comparison) continue;
    const auto& c = *v.comparison;
    std::string levene = v.levene ? fmt::format("{} ({})", f3(v.levene->w), f3(v.levene->p)) : "-";
    line(fmt::format("{:<15} {:>8} {:>5} {:>8} {:>10} {:>8} {:>20} {:>9} {:>17}", v.name, f3(c.t),
                     c.df, f3(c.p_two_tailed) + (c.significant ? "*" : " "), f3(c.mean_diff),
                     f3(c.se_dm), fmt::format("({}, {})", f3(c.ci95.first), f3(c.ci95.second)),
                     f3(c.cohens_d), levene));
  }
  line(fmt::format("(*) The mean difference is significant for alpha = {}.", r.alpha));

  if (!r.reliability.empty()) {
    line("");
    line("Scale reliability (Cronbach's alpha, threshold 0.70)");
    for (const auto& rel : r.reliability) {
      line(fmt::format("  {:<5} items {:>2}  respondents {:>3}  alpha {:>7}{}",
                       to_string(rel.scale_id), rel.item_count, rel.respondent_count,
                       rel.cronbach_alpha ? f3(*rel.cronbach_alpha) : std::string("-"),
                       rel.below_threshold() ? "  BELOW THRESHOLD" : ""));
    }
    if (r.unmatched_participants > 0) {
      line(fmt::format("  {} survey participants not matched to any user", r.unmatched_participants));
    }
  }
  return out;
}

nlohmann::json render_json(const Report& r) {
  using nlohmann::json;
  json doc;
  doc["format"] = "nudgelab-report/1";
  doc["alpha"] = r.alpha;
  if (r.counts) {
    const auto& c = *r.counts;
    doc["counts"] = {{"events", c.events},
                     {"edits", c.edits},
                     {"posts", c.posts},
                     {"shares", c.shares},
                     {"publications", c.publications},
                     {"interventions_g1", c.interventions_g1},
                     {"interventions_g2", c.interventions_g2},
                     {"users_g1", c.users_g1},
                     {"users_g2", c.users_g2},
                     {"duplicates_removed", r.duplicates_removed}};
    json outcomes = json::object();
    for (const auto& [k, n] : r.edit_outcomes) outcomes[std::string(to_string(k))] = n;
    doc["edit_outcomes"] = outcomes;
  }
  auto summary = [](const std::optional<stats::GroupSummary>& s) -> json {
    if (!s) return nullptr;
    return {{"n", s->n}, {"mean", s->mean}, {"sd", s->sd}, {"se", s->se}};
  };
  doc["variables"] = json::array();
  for (const auto& v : r.variables) {
    json entry = {{"name", v.name}, {"label", v.label}, {"g1", summary(v.g1)}, {"g2", summary(v.g2)}};
    if (v.comparison) {
      const auto& c = *v.comparison;
      entry["t_test"] = {{"t", c.t},
                         {"df", c.df},
                         {"p_two_tailed", c.p_two_tailed},
                         {"mean_diff", c.mean_diff},
                         {"se_dm", c.se_dm},
                         {"ci95", {c.ci95.first, c.ci95.second}},
                         {"cohens_d", c.cohens_d},
                         {"significant", c.significant}};
    } else {
      entry["t_test"] = nullptr;
    }
    entry["levene"] = v.levene ? json{{"w", v.levene->w},
                                      {"df1", v.levene->df1},
                                      {"df2", v.levene->df2},
                                      {"p", v.levene->p}}
                               : json(nullptr);
    doc["variables"].push_back(entry);
  }
  doc["reliability"] = json::array();
  for (const auto& rel : r.reliability) {
    doc["reliability"].push_back(
        {{"scale", to_string(rel.scale_id)},
         {"cronbach_alpha", rel.cronbach_alpha ? json(*rel.cronbach_alpha) : json(nullptr)},
         {"item_count", rel.item_count},
         {"respondent_count", rel.respondent_count},
         {"below_threshold", rel.below_threshold()}});
  }
  doc["unmatched_participants"] = r.unmatched_participants;
  return doc;
}

}  // namespace nudgelab::analytics
