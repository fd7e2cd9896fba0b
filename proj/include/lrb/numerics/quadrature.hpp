#pragma once

// Adaptive double-exponential (tanh-sinh) quadrature.
//
// The interval is cut at the caller's breakpoints. Finite pieces are handled
// directly; semi-infinite pieces are mapped onto (0, 1] with u = 1/(1+|z-a|).
// Each piece is refined level by level (step halving) until two successive
// estimates agree, then bisected if the level budget runs out.
//
// Integrands may take either a plain `double` or a `QuadNode`. A QuadNode
// carries the exact distance of the abscissa from both ends of the current
// piece, so an algebraic singularity placed at a breakpoint can be evaluated
// from its increment (z - a) without cancellation.
//
// Nodes stop at offsets of about 1e-300 (relative to the piece half-width),
// so an endpoint singularity (z - a)^(c - 1) loses roughly (1e-300)^c of its
// mass: negligible for c > 0.04, visible below that.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <type_traits>
#include <vector>

#include "lrb/errors.hpp"

namespace lrb::numerics {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int min_level = 3;
  int max_level = 8;
  int max_depth = 12;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

/// Abscissa handed to node-aware integrands.
struct QuadNode {
  double z;
  double left;
  double from_left;   // z - left, exact near `left`
  double right;
  double from_right;  // right - z, exact near `right`

  /// z - p, taken from the stored offsets when p is one of the piece ends.
  double offset_from(double p) const noexcept {
    if (p == left) return from_left;
    if (p == right) return -from_right;
    return z - p;
  }
};

namespace detail {

struct TanhSinhNode {
  double complement;  // 1 - x, x = tanh(pi/2 sinh t)
  double weight;
};

struct TanhSinhTable {
  static constexpr int kLevels = 10;
  static constexpr double kMaxT = 6.5;
  // levels[0] holds t = 1, 2, ...; levels[k] holds the odd multiples of 2^-k.
  std::vector<TanhSinhNode> levels[kLevels + 1];

  TanhSinhTable() {
    auto make = [](double t) {
      const double u = std::numbers::pi / 2.0 * std::sinh(t);
      const double e = std::exp(-2.0 * u);
      const double complement = 2.0 * e / (1.0 + e);
      const double weight = std::numbers::pi / 2.0 * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
      return TanhSinhNode{complement, weight};
    };
    for (int j = 1; j <= static_cast<int>(kMaxT); ++j) {
      const auto n = make(j);
      if (n.complement < 1e-300) break;
      levels[0].push_back(n);
    }
    for (int k = 1; k <= kLevels; ++k) {
      const double h = std::ldexp(1.0, -k);
      for (int j = 1;; j += 2) {
        const double t = j * h;
        if (t > kMaxT) break;
        const auto n = make(t);
        if (n.complement < 1e-300) break;
        levels[k].push_back(n);
      }
    }
  }
};

inline const TanhSinhTable& tanh_sinh_table() {
  static const TanhSinhTable table;
  return table;
}

template <class F>
double call(F& f, const QuadNode& node) {
  if constexpr (std::is_invocable_v<F&, const QuadNode&>) {
    return f(node);
  } else {
    return f(node.z);
  }
}

// Integrand on a finite [a, b] given offsets from the piece ends (a_base, b_base
// are distances from [a, b] to the enclosing piece ends during bisection).
template <class G>
class FinitePanel {
 public:
  FinitePanel(G& g, double piece_left, double piece_right)
      : g_(g), piece_left_(piece_left), piece_right_(piece_right) {}

  double eval(double dl, double dr, long& evals) {
    ++evals;
    const double z = dl <= dr ? piece_left_ + dl : piece_right_ - dr;
    const double v = g_(QuadNode{z, piece_left_, dl, piece_right_, dr});
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "quadrature: integrand is not finite at z=" << z << " (value " << v << ")";
      throw NumericError(os.str());
    }
    return v;
  }

  // One tanh-sinh refinement sequence on the sub-panel whose ends sit at
  // distances base_l (from piece_left) and base_r (from piece_right).
  QuadratureResult run(double base_l, double base_r, double width, const QuadratureOptions& opt,
                       double abs_tol, int depth, long& evals) {
    const auto& table = tanh_sinh_table();
    const double half = 0.5 * width;
    double sum = std::numbers::pi / 2.0 * eval(base_l + half, base_r + half, evals);
    auto add_level = [&](const std::vector<TanhSinhNode>& nodes) {
      double s = 0.0;
      for (const auto& n : nodes) {
        const double off = half * n.complement;
        if (off <= 0.0) continue;
        const double far = width - off;
        s += n.weight * (eval(base_l + off, base_r + far, evals) + eval(base_l + far, base_r + off, evals));
      }
      return s;
    };
    sum += add_level(table.levels[0]);
    double h = 1.0;
    double prev = half * h * sum;
    double est = prev;
    double err = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= opt.max_level && k <= TanhSinhTable::kLevels; ++k) {
      sum += add_level(table.levels[k]);
      h *= 0.5;
      est = half * h * sum;
      err = std::abs(est - prev);
      if (k >= opt.min_level && err <= std::max(abs_tol, opt.rel_tol * std::abs(est))) {
        return {est, err, 0};
      }
      prev = est;
    }
    if (depth >= opt.max_depth) {
      std::ostringstream os;
      os << "quadrature: no convergence on [" << piece_left_ + base_l << ", " << piece_right_ - base_r
         << "] estimate=" << est << " error=" << err << " evaluations=" << evals;
      throw NumericError(os.str());
    }
    const double hw = 0.5 * width;
    auto lhs = run(base_l, base_r + hw, hw, opt, 0.5 * abs_tol, depth + 1, evals);
    auto rhs = run(base_l + hw, base_r, hw, opt, 0.5 * abs_tol, depth + 1, evals);
    return {lhs.value + rhs.value, lhs.error + rhs.error, 0};
  }

 private:
  G& g_;
  double piece_left_;
  double piece_right_;
};

template <class F>
QuadratureResult integrate_finite(F& f, double a, double b, const QuadratureOptions& opt, double abs_tol) {
  long evals = 0;
  auto g = [&f](const QuadNode& n) { return call(f, n); };
  FinitePanel<decltype(g)> panel(g, a, b);
  auto r = panel.run(0.0, 0.0, b - a, opt, abs_tol, 0, evals);
  r.evaluations = evals;
  return r;
}

// [a, inf) when upward, (-inf, a] otherwise; u = 1/(1+|z-a|) on (0, 1].
template <class F>
QuadratureResult integrate_tail(F& f, double a, bool upward, const QuadratureOptions& opt, double abs_tol) {
  long evals = 0;
  auto g = [&](const QuadNode& un) {
    const double u = un.from_left;
    if (u < 1e-100) return 0.0;
    const double w = un.from_right / u;
    const double jac = 1.0 / (u * u);
    constexpr double inf = std::numeric_limits<double>::infinity();
    const QuadNode node = upward ? QuadNode{a + w, a, w, inf, inf} : QuadNode{a - w, -inf, inf, a, w};
    const double v = call(f, node);
    return v == 0.0 ? 0.0 : v * jac;
  };
  FinitePanel<decltype(g)> panel(g, 0.0, 1.0);
  auto r = panel.run(0.0, 0.0, 1.0, opt, abs_tol, 0, evals);
  r.evaluations = evals;
  return r;
}

}  // namespace detail

/// Integral of f over (a, b); either end may be infinite. Breakpoints inside
/// (a, b) split the range into pieces whose ends are exact QuadNode anchors.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, std::vector<double> breaks = {},
                           const QuadratureOptions& opt = {}) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, std::move(breaks), opt);
    r.value = -r.value;
    return r;
  }
  std::erase_if(breaks, [&](double x) { return !(x > a && x < b) || !std::isfinite(x); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (std::isinf(a) && std::isinf(b) && breaks.empty()) breaks.push_back(0.0);

  std::vector<double> pts;
  pts.reserve(breaks.size() + 2);
  pts.push_back(a);
  pts.insert(pts.end(), breaks.begin(), breaks.end());
  pts.push_back(b);

  const std::size_t pieces = pts.size() - 1;
  const double piece_tol = opt.abs_tol / static_cast<double>(pieces);
  QuadratureResult total;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = pts[i];
    const double hi = pts[i + 1];
    QuadratureResult r;
    if (std::isinf(lo)) {
      r = detail::integrate_tail(f, hi, false, opt, piece_tol);
    } else if (std::isinf(hi)) {
      r = detail::integrate_tail(f, lo, true, opt, piece_tol);
    } else {
      r = detail::integrate_finite(f, lo, hi, opt, piece_tol);
    }
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  if (!std::isfinite(total.value)) throw NumericError("integrate: non-finite result");
  return total;
}

/// Value-only convenience wrapper.
template <class F>
double quad(F&& f, double a, double b, std::vector<double> breaks = {}, const QuadratureOptions& opt = {}) {
  return integrate(std::forward<F>(f), a, b, std::move(breaks), opt).value;
}

}  // namespace lrb::numerics
