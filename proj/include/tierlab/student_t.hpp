#pragma once

namespace tierlab {

// Natural log of the gamma function (Lanczos approximation, g=7, n=9),
// |relative error| < 1e-13 for x > 0.
double log_gamma(double x);

// Regularized incomplete beta function I_x(a, b), evaluated with the
// modified Lentz continued fraction; converges to ~1e-15 here, comfortably
// inside the 1e-8 contract. Arguments: a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

// Two-sided tail probability, 2 * P(T >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

// Inverse CDF, bisection on student_t_cdf to ~1e-12. Requires 0 < p < 1.
double student_t_quantile(double p, double df);

}  // namespace tierlab
