#pragma once

// Summary statistics and Kolmogorov-Smirnov tests used by the Monte Carlo
// checks. Sums are compensated (Neumaier) and always run in index order, so a
// statistic depends only on the sample vector, never on how it was produced.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "lrb/errors.hpp"

namespace lrb::stats {

class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
};

inline Summary summarize(std::span<const double> xs) {
  Summary s;
  s.n = xs.size();
  if (s.n == 0) return s;
  NeumaierSum sum;
  for (double x : xs) sum.add(x);
  s.mean = sum.value() / static_cast<double>(s.n);
  if (s.n > 1) {
    NeumaierSum sq;
    for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
    s.variance = sq.value() / static_cast<double>(s.n - 1);
    s.std_error = std::sqrt(s.variance / static_cast<double>(s.n));
  }
  return s;
}

/// Asymptotic Kolmogorov 1% critical constant.
inline constexpr double kKsC99 = 1.62762;

/// sup_x |F_n(x) - F(x)|.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw DomainError("ks: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t lo = 0;  // first index of the current run of ties
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && xs[i] != xs[i - 1]) lo = i;
    // Ties (lattice laws) are handled at the end of each run; the left limit
    // F(x-) is read just below x.
    if (i + 1 < xs.size() && xs[i + 1] == xs[i]) continue;
    const double f = cdf(xs[i]);
    const double below = cdf(xs[i] - 1e-7 * std::max(1.0, std::abs(xs[i])));
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(below - static_cast<double>(lo) / n)});
  }
  return d;
}

inline double ks_critical_one_sample(std::size_t n) { return kKsC99 / std::sqrt(static_cast<double>(n)); }

/// sup_x |F_n(x) - G_m(x)|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

inline double ks_critical_two_sample(std::size_t n, std::size_t m) {
  const double a = static_cast<double>(n), b = static_cast<double>(m);
  return kKsC99 * std::sqrt((a + b) / (a * b));
}

/// Slope of the least-squares line through the origin.
inline double slope_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw DomainError("regression: size mismatch");
  NeumaierSum xy, xx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy.add(x[i] * y[i]);
    xx.add(x[i] * x[i]);
  }
  if (xx.value() == 0.0) throw NumericError("regression: degenerate design");
  return xy.value() / xx.value();
}

}  // namespace lrb::stats
