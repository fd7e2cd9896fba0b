#pragma once

// Special functions on the pricing critical path: normal CDF, log-gamma,
// beta, regularized incomplete beta and gamma.
//
// Incomplete beta uses the modified Lentz evaluation of the standard continued
// fraction (DLMF 8.17.22) with the symmetry switch at x > (a+1)/(a+b+2);
// incomplete gamma uses the power series below x < a+1 and the Legendre
// continued fraction above it.

#include <cmath>
#include <limits>
#include <numbers>

#include "lrb/errors.hpp"

namespace lrb::numerics {

inline double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// log|Gamma(x)|. Reentrant (no write to the global signgam).
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: parameters must be positive");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

inline double beta(double a, double b) { return std::exp(log_beta(a, b)); }

namespace detail {

inline double incomplete_beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw NumericError("incomplete beta: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I(x; a, b) for a, b > 0 and x in [0, 1].
inline double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbeta = log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    return front * detail::incomplete_beta_cf(x, a, b) / a;
  }
  const double y = 1.0 - x;
  const double front = std::exp(b * std::log(y) + a * std::log(x) - lbeta);
  return 1.0 - front * detail::incomplete_beta_cf(y, b, a) / b;
}

/// Complement 1 - I(x; a, b) evaluated without cancellation.
inline double incomplete_beta_complement(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must lie in [0, 1]");
  return incomplete_beta(1.0 - x, b, a);
}

/// Regularized lower incomplete gamma P(a, x).
inline double incomplete_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete_gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_front = a * std::log(x) - x - log_gamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 0; n < 100000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17) return sum * std::exp(log_front);
    }
    throw NumericError("incomplete_gamma_p: series did not converge");
  }
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return 1.0 - std::exp(log_front) * h;
  }
  throw NumericError("incomplete_gamma_p: continued fraction did not converge");
}

}  // namespace lrb::numerics
