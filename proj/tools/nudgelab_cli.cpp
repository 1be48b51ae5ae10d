// Operator entry point. Exit codes: 0 ok, 1 usage, 2 validation,
// 3 I/O or storage, 4 audit violations found.
#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "nudgelab/analytics/report.hpp"
#include "nudgelab/analytics/survey_scoring.hpp"
#include "nudgelab/domain/corpus.hpp"
#include "nudgelab/domain/error.hpp"
#include "nudgelab/service/config.hpp"
#include "nudgelab/service/http_server.hpp"
#include "nudgelab/service/router.hpp"
#include "nudgelab/sim/simulator.hpp"
#include "nudgelab/store/audit.hpp"
#include "nudgelab/store/event_store.hpp"

namespace {

using namespace nudgelab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitViolations = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::Storage:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

std::atomic<bool> g_interrupted{false};
extern "C" void on_signal(int) { g_interrupted = true; }

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out.flush()) throw Error(ErrorCode::Io, "write failed: " + path);
}

// --- serve ---------------------------------------------------------------

struct ServeArgs {
  std::string config;
  std::string bind;
  std::string database;
};

int cmd_serve(const ServeArgs& a) {
  ServerConfig cfg = a.config.empty() ? ServerConfig{} : load_server_config(a.config);
  apply_environment(cfg);
  if (!a.database.empty()) cfg.database = a.database;
  if (!a.bind.empty()) std::tie(cfg.host, cfg.port) = parse_bind(a.bind);

  EventStore store(cfg.database);
  Service service(store, cfg.service, std::make_shared<SystemClock>());
  Router router(service);
  HttpServer server(router);
  int port = server.bind(cfg.host, cfg.port);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.start();
  std::cerr << "nudgelab: serving on " << cfg.host << ":" << port << " (store " << cfg.database
            << ")\n";
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  // Stop accepting, let in-flight handlers finish; every committed write is
  // already durable (synchronous=FULL).
  server.stop();
  std::cerr << "nudgelab: stopped\n";
  return kExitOk;
}

// --- seed-corpus ---------------------------------------------------------

int cmd_seed(const std::string& database, const std::string& corpus_path) {
  auto corpus = load_corpus(corpus_path);
  validate_corpus(corpus);
  EventStore store(database);
  store.seed_corpus(corpus);
  std::cout << "seeded " << corpus.size() << " messages in " << message_categories().size()
            << " categories into " << database << "\n";
  return kExitOk;
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string cohort;
  std::string endpoint;
  std::string database;
  std::string corpus = "data/corpus.tsv";
  std::string policy;
  std::string manifest;
  std::string request_log;
  std::optional<std::uint64_t> seed;
  std::optional<int> n1, n2, days, threads;
  std::optional<double> rate, duplication_rate;
};

int cmd_simulate(const SimulateArgs& a) {
  CohortConfig cfg = a.cohort.empty() ? CohortConfig{} : load_cohort_config(a.cohort);
  if (a.seed) cfg.rng_seed = *a.seed;
  if (a.n1) cfg.n_group1 = *a.n1;
  if (a.n2) cfg.n_group2 = *a.n2;
  if (a.days) cfg.experiment_days = *a.days;
  if (a.threads) cfg.threads = *a.threads;
  if (a.rate) cfg.attempts_per_day_rate = *a.rate;
  if (a.duplication_rate) cfg.duplication_rate = *a.duplication_rate;
  cfg.validate();

  RequestLog log;
  RequestLog* log_ptr = a.request_log.empty() ? nullptr : &log;
  RunManifest manifest;
  if (!a.endpoint.empty()) {
    manifest = run_cohort(cfg, [&] { return std::make_unique<HttpApiClient>(a.endpoint); }, log_ptr);
  } else {
    if (a.database.empty()) throw Error(ErrorCode::Validation, "give --endpoint or --database");
    EventStore store(a.database);
    if (store.corpus().empty()) store.seed_corpus(load_corpus(a.corpus));
    ServiceConfig sc;
    sc.server_secret = "simulation";
    sc.password_iterations = 1000;
    sc.clock_mode = ClockMode::Client;
    if (!a.policy.empty()) sc.policy = load_policy(a.policy);
    if (!sc.policy.rng_seed) sc.policy.rng_seed = cfg.rng_seed;
    sc.policy.day_boundary_timezone = cfg.time_zone;
    Service service(store, sc, std::make_shared<SystemClock>());
    Router router(service);
    manifest = run_cohort(cfg, [&] { return std::make_unique<InProcessClient>(router); }, log_ptr);
  }
  write_output(a.manifest, to_json(manifest).dump(2) + "\n");
  if (log_ptr) write_output(a.request_log, to_json(log).dump() + "\n");
  std::cerr << "simulated " << manifest.users_created << " users, " << manifest.events_emitted
            << " events\n";
  return kExitOk;
}

// --- report --------------------------------------------------------------

struct ReportArgs {
  std::string events;
  std::string roster;
  std::string survey;
  std::string summaries;
  std::string output;
  std::string format = "text";
  std::string standardizer = "average";
};

int cmd_report(const ReportArgs& a) {
  analytics::ReportOptions opts;
  opts.test.standardizer = a.standardizer == "pooled" ? stats::EffectSizeStandardizer::Pooled
                                                      : stats::EffectSizeStandardizer::AverageVariance;
  analytics::Report report;
  if (!a.summaries.empty()) {
    auto rows = analytics::read_summaries_file(a.summaries);
    report = analytics::analyze_summaries(rows, opts);
  } else {
    auto rows = read_events_file(a.events);
    std::vector<RosterRow> roster;
    if (!a.roster.empty()) roster = read_roster_file(a.roster);
    std::optional<std::vector<analytics::SurveyItemResponse>> survey;
    if (!a.survey.empty()) survey = analytics::read_survey_file(a.survey);
    std::optional<std::span<const analytics::SurveyItemResponse>> survey_span;
    if (survey) survey_span = std::span<const analytics::SurveyItemResponse>(*survey);
    report = analytics::analyze_events(rows, roster, survey_span, opts);
  }
  write_output(a.output, a.format == "json" ? analytics::render_json(report).dump(2) + "\n"
                                            : analytics::render_text(report));
  return kExitOk;
}

// --- export --------------------------------------------------------------

int cmd_export(const std::string& database, const std::string& output, const std::string& roster) {
  EventStore store(database);
  auto n = store.export_events(output);
  std::cerr << "exported " << n << " events to " << output << "\n";
  if (!roster.empty()) {
    auto r = store.export_roster(roster);
    std::cerr << "exported " << r << " users to " << roster << "\n";
  }
  return kExitOk;
}

// --- survey-score --------------------------------------------------------

int cmd_survey(const std::string& path, const std::string& output, const std::string& format) {
  auto responses = analytics::read_survey_file(path);
  auto scores = analytics::score_survey(responses, standard_scales());
  std::string text;
  if (format == "json") {
    json doc = {{"scores", json::array()}, {"reliability", json::array()}};
    for (const auto& s : scores.scores) {
      doc["scores"].push_back({{"participant_id", s.participant_id},
                               {"scale", to_string(s.scale_id)},
                               {"score", s.score}});
    }
    for (const auto& r : scores.reliability) {
      doc["reliability"].push_back(
          {{"scale", to_string(r.scale_id)},
           {"cronbach_alpha", r.cronbach_alpha ? json(*r.cronbach_alpha) : json(nullptr)},
           {"items", r.item_count},
           {"respondents", r.respondent_count},
           {"below_threshold", r.below_threshold()}});
    }
    text = doc.dump(2) + "\n";
  } else {
    text = "participant_id,scale,score\n";
    for (const auto& s : scores.scores) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", s.score);
      text += s.participant_id + "," + std::string(to_string(s.scale_id)) + "," + buf + "\n";
    }
    text += "\nscale,cronbach_alpha,items,respondents,flag\n";
    for (const auto& r : scores.reliability) {
      char buf[32] = "NA";
      if (r.cronbach_alpha) std::snprintf(buf, sizeof buf, "%.4f", *r.cronbach_alpha);
      text += std::string(to_string(r.scale_id)) + "," + buf + "," +
              std::to_string(r.item_count) + "," + std::to_string(r.respondent_count) + "," +
              (r.below_threshold() ? "below 0.70" : "") + "\n";
    }
  }
  write_output(output, text);
  return kExitOk;
}

// --- audit ---------------------------------------------------------------

int cmd_audit(const std::string& database, const std::string& events, const std::string& policy,
              const std::string& format) {
  PolicyConfig cfg = policy.empty() ? PolicyConfig{} : load_policy(policy);
  std::vector<Violation> violations;
  if (!database.empty()) {
    EventStore store(database);
    violations = audit_store(store, cfg);
  } else {
    auto rows = read_events_file(events);
    violations = audit_export(rows, cfg);
  }
  if (format == "json") {
    std::cout << to_json(violations).dump(2) << "\n";
  } else {
    for (const auto& v : violations) std::cout << describe(v) << "\n";
    std::cout << violations.size() << " violation(s)\n";
  }
  return violations.empty() ? kExitOk : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nudgelab: privacy-nudge field experiment platform"};
  app.require_subcommand(1);

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "Run the HTTP API service");
  s->add_option("--config", serve.config, "Server config JSON")->check(CLI::ExistingFile);
  s->add_option("--bind", serve.bind, "host:port, overrides config and environment");
  s->add_option("--database", serve.database, "SQLite store path");

  std::string seed_db, seed_corpus = "data/corpus.tsv";
  auto* sc = app.add_subcommand("seed-corpus", "Load the message corpus into a store");
  sc->add_option("--database", seed_db, "SQLite store path")->required();
  sc->add_option("--corpus", seed_corpus, "Corpus TSV")->capture_default_str();

  SimulateArgs sim;
  auto* sm = app.add_subcommand("simulate", "Drive a synthetic cohort through the API");
  sm->add_option("--cohort", sim.cohort, "Cohort config JSON")->check(CLI::ExistingFile);
  auto* ep = sm->add_option("--endpoint", sim.endpoint, "Base URL of a running service");
  sm->add_option("--database", sim.database, "Run an in-process service on this store")
      ->excludes(ep);
  sm->add_option("--corpus", sim.corpus, "Corpus for an unseeded in-process store")
      ->capture_default_str();
  sm->add_option("--policy", sim.policy, "Policy JSON for the in-process service");
  sm->add_option("--manifest", sim.manifest, "Run manifest output (default stdout)");
  sm->add_option("--request-log", sim.request_log, "Write every request and response here");
  sm->add_option("--seed", sim.seed, "Override rng_seed");
  sm->add_option("--n1", sim.n1, "Override n_group1");
  sm->add_option("--n2", sim.n2, "Override n_group2");
  sm->add_option("--days", sim.days, "Override experiment_days");
  sm->add_option("--rate", sim.rate, "Override attempts_per_day_rate");
  sm->add_option("--duplication-rate", sim.duplication_rate, "Override duplication_rate");
  sm->add_option("--threads", sim.threads, "Override threads");

  ReportArgs rep;
  auto* rp = app.add_subcommand("report", "Run the analytics pipeline");
  auto* ev = rp->add_option("--events", rep.events, "Events export CSV");
  rp->add_option("--roster", rep.roster, "Roster CSV (users without events)");
  rp->add_option("--survey", rep.survey, "Survey responses CSV");
  auto* su = rp->add_option("--summaries", rep.summaries, "variable,group,n,mean,sd CSV");
  ev->excludes(su);
  rp->add_option("--output", rep.output, "Output path (default stdout)");
  rp->add_option("--format", rep.format)->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  rp->add_option("--standardizer", rep.standardizer, "Effect-size standardizer")
      ->check(CLI::IsMember({"average", "pooled"}))
      ->capture_default_str();

  std::string ex_db, ex_out, ex_roster;
  auto* ex = app.add_subcommand("export", "Export events (and roster) as CSV");
  ex->add_option("--database", ex_db, "SQLite store path")->required();
  ex->add_option("--output", ex_out, "Events CSV")->required();
  ex->add_option("--roster", ex_roster, "Roster CSV");

  std::string sv_in, sv_out, sv_format = "text";
  auto* sv = app.add_subcommand("survey-score", "Score constructs and reliability");
  sv->add_option("--survey", sv_in, "Survey responses CSV")->required();
  sv->add_option("--output", sv_out, "Output path (default stdout)");
  sv->add_option("--format", sv_format)->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string au_db, au_events, au_policy, au_format = "text";
  auto* au = app.add_subcommand("audit", "Re-check policy invariants over a full history");
  auto* adb = au->add_option("--database", au_db, "SQLite store path");
  auto* aev = au->add_option("--events", au_events, "Events export CSV");
  adb->excludes(aev);
  au->add_option("--policy", au_policy, "Policy JSON (default policy otherwise)");
  au->add_option("--format", au_format)->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_serve(serve);
    if (*sc) return cmd_seed(seed_db, seed_corpus);
    if (*sm) return cmd_simulate(sim);
    if (*rp) {
      if (rep.events.empty() && rep.summaries.empty()) {
        std::cerr << "report: give --events or --summaries\n";
        return kExitUsage;
      }
      return cmd_report(rep);
    }
    if (*ex) return cmd_export(ex_db, ex_out, ex_roster);
    if (*sv) return cmd_survey(sv_in, sv_out, sv_format);
    if (*au) {
      if (au_db.empty() == au_events.empty()) {
        std::cerr << "audit: give exactly one of --database or --events\n";
        return kExitUsage;
      }
      return cmd_audit(au_db, au_events, au_policy, au_format);
    }
  } catch (const Error& e) {
    std::cerr << "nudgelab: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "nudgelab: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
