#include "margin_guard/special_functions.hpp"

#include <cmath>
#include <limits>

#include "margin_guard/errors.hpp"

namespace margin_guard {

namespace {

constexpr int kMaxIterations = 1000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// x^a e^-x / Gamma(a), computed in log space.
double prefactor(double a, double x) { return std::exp(a * std::log(x) - x - std::lgamma(a)); }

// P(a, x) by the power series sum_n x^n / (a (a+1) ... (a+n)); converges
// quickly for x < a + 1.
double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * prefactor(a, x);
}

// Q(a, x) by the Legendre continued fraction with modified Lentz evaluation;
// converges for x >= a + 1.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return prefactor(a, x) * h;
}

void check_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw InputError("incomplete gamma: need a > 0 and x >= 0");
  }
}

}  // namespace

double gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? lower_series(a, x) : 1.0 - upper_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - lower_series(a, x) : upper_fraction(a, x);
}

double gaussian_norm_tail(double r, double sigma, unsigned dim) {
  if (dim == 0 || !(sigma >= 0.0) || !(r >= 0.0)) {
    throw InputError("gaussian tail: need dim >= 1, sigma >= 0, r >= 0");
  }
  if (r == 0.0) return 1.0;
  if (sigma == 0.0) return 0.0;
  const double z = r / sigma;
  return gamma_q(0.5 * dim, 0.5 * z * z);
}

}  // namespace margin_guard
