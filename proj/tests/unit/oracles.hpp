#pragma once

// Deliberately naive reference implementations, kept apart from the
// library's numerics: two-pass moments, Simpson quadrature of the t
// density, bisection for quantiles, covariance-form alpha.

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace nudgelab::oracle {

inline double mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
  double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

inline double t_density(double t, double df) {
  double logc = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
  return std::exp(logc - (df + 1) / 2 * std::log1p(t * t / df));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double eps, int depth) {
  double m = (a + b) / 2;
  double lm = (a + m) / 2;
  double rm = (m + b) / 2;
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15 * eps) {
    return left + right + (left + right - whole) / 15;
  }
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-13, 50);
}

// P(T <= t) as 1/2 plus the integral of the density from 0 to t.
inline double t_cdf(double t, double df) {
  double area = integrate([df](double x) { return t_density(x, df); }, 0.0, std::fabs(t));
  return t >= 0 ? 0.5 + area : 0.5 - area;
}

inline double t_quantile(double p, double df) {
  double lo = -1e3, hi = 1e3;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    (t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

struct Comparison {
  double t, p, diff, se, lo, hi, d;
};

inline Comparison pooled(const std::vector<double>& a, const std::vector<double>& b) {
  double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  double v1 = variance(a), v2 = variance(b);
  double df = n1 + n2 - 2;
  double sp = std::sqrt(((n1 - 1) * v1 + (n2 - 1) * v2) / df);
  double se = sp * std::sqrt(1 / n1 + 1 / n2);
  double diff = mean(a) - mean(b);
  double t = diff / se;
  double crit = t_quantile(0.975, df);
  double p = 2.0 * (1.0 - t_cdf(std::fabs(t), df));
  return {t, p, diff, se, diff - crit * se, diff + crit * se, diff / std::sqrt((v1 + v2) / 2)};
}

// One-way ANOVA F over absolute deviations from each group mean, with the
// between-group sum of squares taken as total minus within.
inline double levene_w(const std::vector<std::vector<double>>& groups) {
  std::vector<std::vector<double>> z;
  std::vector<double> all;
  for (const auto& g : groups) {
    double m = mean(g);
    z.emplace_back();
    for (double v : g) {
      z.back().push_back(std::fabs(v - m));
      all.push_back(z.back().back());
    }
  }
  double grand = mean(all);
  double sst = 0, ssw = 0;
  for (double v : all) sst += (v - grand) * (v - grand);
  for (const auto& g : z) {
    double m = mean(g);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  double k = static_cast<double>(groups.size());
  double n = static_cast<double>(all.size());
  return ((sst - ssw) / (k - 1)) / (ssw / (n - k));
}

inline double cronbach_alpha(const std::vector<std::vector<int>>& m) {
  std::size_t k = m[0].size();
  double item_var = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> col;
    for (const auto& row : m) col.push_back(row[j]);
    item_var += variance(col);
  }
  std::vector<double> totals;
  for (const auto& row : m) totals.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  double kk = static_cast<double>(k);
  return kk / (kk - 1) * (1 - item_var / variance(totals));
}

}  // namespace nudgelab::oracle
