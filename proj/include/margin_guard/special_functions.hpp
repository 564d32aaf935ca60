#pragma once

namespace margin_guard {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), evaluated
/// directly (continued fraction) where 1 - P would cancel.
double gamma_q(double a, double x);

/// P(|Z| >= r) for Z ~ N(0, sigma^2 I_d): the chi tail Q(d/2, r^2 / (2 sigma^2)).
double gaussian_norm_tail(double r, double sigma, unsigned dim);

}  // namespace margin_guard
