#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "lrb/errors.hpp"

namespace lrb::numerics {

struct RootOptions {
  double tol = 1e-12;          // target |f(x)|
  int monotone_samples = 16;   // interior points used to verify monotonicity; 0 disables
  int max_iterations = 400;
};

/// Root of a monotone f on [lo, hi] by Brent's method. The iterate never
/// leaves the bracket. Throws NoRootError when f(lo), f(hi) do not straddle
/// zero and NonMonotoneError when the sampled sign pattern is not monotone.
template <class F>
double find_root_monotone(F&& f, double lo, double hi, const RootOptions& opt = {}) {
  if (!(lo < hi)) throw DomainError("find_root_monotone: empty bracket");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw NumericError("find_root_monotone: non-finite bracket value");
  if (std::abs(fa) <= opt.tol) return a;
  if (std::abs(fb) <= opt.tol) return b;
  if ((fa > 0) == (fb > 0)) {
    std::ostringstream os;
    os << "find_root_monotone: no sign change on [" << lo << ", " << hi << "] (f=" << fa << ", " << fb << ")";
    throw NoRootError(os.str());
  }
  if (opt.monotone_samples > 0) {
    const bool increasing = fb > fa;
    double prev = fa;
    const double slack = 1e-12 * std::max(std::abs(fa), std::abs(fb));
    for (int i = 1; i <= opt.monotone_samples + 1; ++i) {
      const double x = i > opt.monotone_samples ? hi : lo + (hi - lo) * i / (opt.monotone_samples + 1);
      const double v = i > opt.monotone_samples ? fb : f(x);
      if (increasing ? v < prev - slack : v > prev + slack) {
        std::ostringstream os;
        os << "find_root_monotone: function is not monotone on [" << lo << ", " << hi << "] near x=" << x;
        throw NonMonotoneError(os.str());
      }
      prev = v;
    }
  }

  // Brent (zeroin), b is the best iterate, [b, c] always brackets the root.
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double xtol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
    const double m = 0.5 * (c - b);
    if (std::abs(fb) <= opt.tol || std::abs(m) <= xtol || fb == 0.0) return b;
    if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(xtol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = d;
      }
    } else {
      d = m;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > xtol ? d : (m > 0 ? xtol : -xtol);
    fb = f(b);
    if (!std::isfinite(fb)) throw NumericError("find_root_monotone: non-finite function value");
  }
  throw NumericError("find_root_monotone: iteration budget exhausted");
}

}  // namespace lrb::numerics
