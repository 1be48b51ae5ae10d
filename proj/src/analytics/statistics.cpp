#include "nudgelab/analytics/statistics.hpp"

#include <cmath>
#include <limits>

#include "nudgelab/analytics/distributions.hpp"
#include "nudgelab/domain/error.hpp"

namespace nudgelab::stats {

GroupSummary summarize(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::Validation, "summary needs at least 2 observations");
  }
  // Welford's update.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double x : values) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  return summary_from_moments(static_cast<int>(values.size()), mean,
                              std::sqrt(m2 / static_cast<double>(values.size() - 1)));
}

GroupSummary summary_from_moments(int n, double mean, double sd) {
  if (n < 2) throw Error(ErrorCode::Validation, "summary needs n >= 2");
  if (sd < 0.0) throw Error(ErrorCode::Validation, "standard deviation must be >= 0");
  return {n, mean, sd, sd / std::sqrt(static_cast<double>(n))};
}

GroupComparison pooled_t_test(const GroupSummary& g1, const GroupSummary& g2,
                              const TestOptions& options) {
  if (g1.n < 2 || g2.n < 2) throw Error(ErrorCode::Validation, "t-test needs n >= 2 per group");

  const double n1 = g1.n;
  const double n2 = g2.n;
  GroupComparison c;
  c.df = g1.n + g2.n - 2;
  c.mean_diff = g1.mean - g2.mean;
  const double pooled_var =
      ((n1 - 1.0) * g1.sd * g1.sd + (n2 - 1.0) * g2.sd * g2.sd) / static_cast<double>(c.df);
  c.pooled_sd = std::sqrt(pooled_var);
  c.se_dm = c.pooled_sd * std::sqrt(1.0 / n1 + 1.0 / n2);

  if (c.se_dm == 0.0) {
    if (c.mean_diff != 0.0) {
      throw Error(ErrorCode::Degenerate, "zero pooled variance with unequal means");
    }
    c.t = 0.0;
    c.p_two_tailed = 1.0;
    c.ci95 = {0.0, 0.0};
    c.cohens_d = 0.0;
    c.significant = false;
    return c;
  }

  c.t = c.mean_diff / c.se_dm;
  c.p_two_tailed = student_t_two_tailed(c.t, c.df);
  const double t_crit = student_t_quantile(0.975, c.df);
  c.ci95 = {c.mean_diff - t_crit * c.se_dm, c.mean_diff + t_crit * c.se_dm};

  const double standardizer = options.standardizer == EffectSizeStandardizer::Pooled
                                  ? c.pooled_sd
                                  : std::sqrt((g1.sd * g1.sd + g2.sd * g2.sd) / 2.0);
  c.cohens_d = c.mean_diff / standardizer;
  c.significant = c.p_two_tailed < options.alpha;
  return c;
}

LeveneResult levene_test(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error(ErrorCode::Validation, "Levene test needs >= 2 groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error(ErrorCode::Validation, "Levene test needs n >= 2 per group");
    total += g.size();
  }

  const std::size_t k = groups.size();
  std::vector<std::vector<double>> dev(k);
  std::vector<double> dev_mean(k, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double mean = 0.0;
    for (double x : groups[i]) mean += x;
    mean /= static_cast<double>(groups[i].size());
    for (double x : groups[i]) {
      dev[i].push_back(std::fabs(x - mean));
      dev_mean[i] += dev[i].back();
      grand += dev[i].back();
    }
    dev_mean[i] /= static_cast<double>(groups[i].size());
  }
  grand /= static_cast<double>(total);

  double between = 0.0;
  double within = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    between += static_cast<double>(groups[i].size()) * (dev_mean[i] - grand) * (dev_mean[i] - grand);
    for (double z : dev[i]) within += (z - dev_mean[i]) * (z - dev_mean[i]);
  }

  LeveneResult r;
  r.df1 = static_cast<int>(k - 1);
  r.df2 = static_cast<int>(total - k);
  if (within == 0.0) {
    r.w = between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.p = between == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.w = (static_cast<double>(r.df2) * between) / (static_cast<double>(r.df1) * within);
  r.p = f_survival(r.w, r.df1, r.df2);
  return r;
}

}  // namespace nudgelab::stats
