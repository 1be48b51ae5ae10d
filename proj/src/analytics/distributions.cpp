#include "nudgelab/analytics/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nudgelab/domain/error.hpp"

namespace nudgelab::stats {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for I_x(a, b), valid for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw Error(ErrorCode::Degenerate, "incomplete beta continued fraction did not converge");
}

// I_x(a, b) given both x and 1 - x, so callers can avoid cancellation.
double incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (x <= 0.0) return 0.0;
  if (one_minus_x <= 0.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log(one_minus_x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, one_minus_x) / b;
}

void require_df(double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::Validation, "degrees of freedom must be positive");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::Validation, "beta parameters must be > 0");
  if (x < 0.0 || x > 1.0) throw Error(ErrorCode::Validation, "incomplete beta: x outside [0, 1]");
  return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_pdf(double t, double df) {
  require_df(df);
  const double log_norm = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                          0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - (df + 1.0) / 2.0 * std::log1p(t * t / df));
}

double student_t_two_tailed(double t, double df) {
  require_df(df);
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double denom = df + t2;
  // P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  return incomplete_beta(df / 2.0, 0.5, df / denom, t2 / denom);
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_tailed(t, df);
  return t < 0.0 ? tail : 1.0 - tail;
}

double student_t_quantile(double p, double df) {
  require_df(df);
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::Validation, "quantile: p outside (0, 1)");
  if (p == 0.5) return 0.0;

  double lo = -1.0;
  double hi = 1.0;
  while (student_t_cdf(lo, df) > p) lo *= 2.0;
  while (student_t_cdf(hi, df) < p) hi *= 2.0;

  // Bisection for robustness, Newton steps to finish.
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(x)); ++i) {
    x = 0.5 * (lo + hi);
    (student_t_cdf(x, df) < p ? lo : hi) = x;
  }
  for (int i = 0; i < 3; ++i) {
    const double pdf = student_t_pdf(x, df);
    if (pdf <= 0.0) break;
    const double next = x - (student_t_cdf(x, df) - p) / pdf;
    if (next < lo || next > hi) break;
    x = next;
  }
  return x;
}

double f_survival(double f, double d1, double d2) {
  require_df(d1);
  require_df(d2);
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double denom = d2 + d1 * f;
  return incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * f / denom);
}

}  // namespace nudgelab::stats
