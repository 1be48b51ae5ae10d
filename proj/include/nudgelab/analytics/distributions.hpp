#pragma once

namespace nudgelab::stats {

// Regularized incomplete beta I_x(a, b), continued fraction with modified
// Lentz iteration; absolute error below 1e-14 over the ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_pdf(double t, double df);
double student_t_cdf(double t, double df);
// P(|T| >= |t|).
double student_t_two_tailed(double t, double df);
// Inverse CDF; p must lie in (0, 1).
double student_t_quantile(double p, double df);

// P(F >= f) for F(d1, d2).
double f_survival(double f, double d1, double d2);

}  // namespace nudgelab::stats
