#pragma once

#include <span>
#include <utility>
#include <vector>

namespace nudgelab::stats {

// Descriptive statistics with the sample (n - 1) standard deviation.
struct GroupSummary {
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;  // sd / sqrt(n)
};

// Throws Error(Validation) for n < 2.
GroupSummary summarize(std::span<const double> values);
// From published moments; se is derived.
GroupSummary summary_from_moments(int n, double mean, double sd);

// Standardizer for Cohen's d.
//   AverageVariance: sqrt((s1^2 + s2^2) / 2), the convention of the
//                    published comparison tables.
//   Pooled:          the pooled sd used by the t statistic.
// The two coincide for equal group sizes.
enum class EffectSizeStandardizer { AverageVariance, Pooled };

struct GroupComparison {
  double t = 0.0;
  int df = 0;
  double p_two_tailed = 1.0;
  double mean_diff = 0.0;
  double se_dm = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  double cohens_d = 0.0;
  double pooled_sd = 0.0;
  bool significant = false;  // p < alpha
};

struct TestOptions {
  double alpha = 0.05;
  EffectSizeStandardizer standardizer = EffectSizeStandardizer::AverageVariance;
};

// Independent-samples t-test under equal variances (df = n1 + n2 - 2).
// Zero pooled variance: equal means give t = 0, p = 1, d = 0; unequal
// means throw Error(Degenerate).
GroupComparison pooled_t_test(const GroupSummary& g1, const GroupSummary& g2,
                              const TestOptions& options = {});

struct LeveneResult {
  double w = 0.0;
  int df1 = 0;
  int df2 = 0;
  double p = 1.0;
};

// Mean-centred Levene test: one-way ANOVA F on |x_ij - mean_i|. When the
// absolute deviations have no within-group spread at all, W is 0 (p = 1) if
// the group means of the deviations also agree and +inf (p = 0) otherwise.
LeveneResult levene_test(std::span<const std::vector<double>> groups);

}  // namespace nudgelab::stats
