#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lrb/errors.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/numerics/roots.hpp"

namespace lrb::numerics {

/// Numeric quantile function of a density known up to quadrature.
///
/// Knots (which may include +-inf as the outer ends) cut the support into
/// panels; panel masses are tabulated once, then each quantile is located by
/// binary search and polished by root finding on the partial integral until
/// |F(x) - u| <= tol. The table is normalised by its own total, so a density
/// off by a quadrature error still yields a proper distribution.
template <class Density>
class CdfTable {
 public:
  CdfTable(Density density, std::vector<double> knots, double scale, double tol = 1e-10,
           QuadratureOptions quad = {})
      : density_(std::move(density)), knots_(std::move(knots)), scale_(scale), tol_(tol), quad_(quad) {
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
    if (knots_.size() < 2) throw DomainError("cdf table: need at least two knots");
    cdf_.assign(knots_.size(), 0.0);
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      cdf_[i] = cdf_[i - 1] + integrate(density_, knots_[i - 1], knots_[i], {}, quad_).value;
    }
    total_ = cdf_.back();
    if (!(total_ > 0.0) || !std::isfinite(total_)) throw NumericError("cdf table: density has no finite positive mass");
    for (auto& c : cdf_) c /= total_;
  }

  double total_mass() const noexcept { return total_; }

  double quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("cdf table: u must lie in (0, 1)");
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
    if (i == 0) i = 1;
    while (i + 1 < cdf_.size() && cdf_[i] == cdf_[i - 1] && cdf_[i] <= u) ++i;
    const double a = knots_[i - 1];
    const double b = knots_[i];
    const double base = cdf_[i - 1];
    auto F = [&](double x) {
      if (x == a) return base - u;
      return base + integrate(density_, a, x, {}, quad_).value / total_ - u;
    };
    double lo = a, hi = b;
    if (std::isinf(lo)) {
      double step = scale_;
      lo = b - step;
      while (F(lo) > 0.0) {
        step *= 2.0;
        lo = b - step;
      }
    }
    if (std::isinf(hi)) {
      double step = scale_;
      hi = a + step;
      while (F(hi) < 0.0) {
        step *= 2.0;
        hi = a + step;
      }
    }
    const double flo = F(lo);
    const double fhi = F(hi);
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;
    RootOptions ro;
    ro.tol = tol_;
    ro.monotone_samples = 0;
    return find_root_monotone(F, lo, hi, ro);
  }

 private:
  Density density_;
  std::vector<double> knots_;
  double scale_;
  double tol_;
  QuadratureOptions quad_;
  std::vector<double> cdf_;
  double total_ = 0.0;
};

}  // namespace lrb::numerics
