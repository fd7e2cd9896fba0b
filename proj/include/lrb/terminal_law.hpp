#pragma once

// Mixed terminal laws nu = sum_i v_i delta_{z_i} + p(z) dz (no singular
// continuous part). Also used for the conditional laws nu_s.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lrb/errors.hpp"
#include "lrb/kernels.hpp"
#include "lrb/numerics/inversion.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/numerics/special.hpp"
#include "lrb/random.hpp"

namespace lrb {

struct Atom {
  double location;
  double weight;
  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class TailClass { compact, exponential, gaussian, heavy };

/// Closed-form density families accepted in scenario files.
struct ParametricDensity {
  enum class Family { normal, gamma, uniform };
  Family family;
  double p1;  // normal: mean, gamma: shape, uniform: a
  double p2;  // normal: variance, gamma: scale, uniform: b
  friend bool operator==(const ParametricDensity&, const ParametricDensity&) = default;
};

/// Absolutely continuous part w * p(z). The log-density is evaluated at
/// z = base + offset, so a density with a singular point can be integrated
/// accurately when that point is a quadrature breakpoint (base == point).
class DensityPart {
 public:
  using LogDensity = std::function<double(double base, double offset)>;

  struct Hints {
    double lower = kNegInf;
    double upper = kInf;
    double center = 0.0;
    double scale = 1.0;
    TailClass tail = TailClass::gaussian;
    std::vector<double> breakpoints;
  };

  DensityPart(LogDensity log_density, double weight, Hints hints,
              std::optional<ParametricDensity> parametric = std::nullopt)
      : log_density_(std::move(log_density)),
        weight_(weight),
        log_weight_(std::log(weight)),
        hints_(std::move(hints)),
        parametric_(parametric) {
    if (!(weight > 0.0) || !std::isfinite(weight)) throw InvalidSpecError("density part: weight must be positive");
    if (!(hints_.lower < hints_.upper)) throw InvalidSpecError("density part: empty support");
    if (!(hints_.scale > 0.0)) throw InvalidSpecError("density part: scale hint must be positive");
    std::erase_if(hints_.breakpoints, [&](double b) { return !(b > hints_.lower && b < hints_.upper); });
    std::sort(hints_.breakpoints.begin(), hints_.breakpoints.end());
  }

  static DensityPart normal(double mean, double variance, double weight = 1.0) {
    if (!std::isfinite(mean) || !(variance > 0.0) || !std::isfinite(variance)) {
      throw InvalidSpecError("normal density: variance must be positive and finite");
    }
    const double sd = std::sqrt(variance);
    const double c = -0.5 * std::log(2.0 * std::numbers::pi * variance);
    Hints h{kNegInf, kInf, mean, sd, TailClass::gaussian, {}};
    for (double k : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) h.breakpoints.push_back(mean + k * sd);
    return DensityPart(
        [mean, variance, c](double base, double offset) {
          const double d = (base - mean) + offset;
          return c - d * d / (2.0 * variance);
        },
        weight, std::move(h), ParametricDensity{ParametricDensity::Family::normal, mean, variance});
  }

  static DensityPart gamma(double shape, double scale, double weight = 1.0) {
    if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
      throw InvalidSpecError("gamma density: shape and scale must be positive and finite");
    }
    const double c = -numerics::log_gamma(shape) - shape * std::log(scale);
    const double mean = shape * scale;
    const double sd = std::sqrt(shape) * scale;
    Hints h{0.0, kInf, mean, sd, TailClass::exponential, {}};
    for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) h.breakpoints.push_back(mean + k * sd);
    h.breakpoints.push_back(std::max(shape - 1.0, 0.0) * scale);
    return DensityPart(
        [shape, scale, c](double base, double offset) {
          const double z = base + offset;
          if (!(z > 0.0)) return kNegInf;
          return c + (shape - 1.0) * std::log(z) - z / scale;
        },
        weight, std::move(h), ParametricDensity{ParametricDensity::Family::gamma, shape, scale});
  }

  static DensityPart uniform(double a, double b, double weight = 1.0) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw InvalidSpecError("uniform density: need a < b");
    const double c = -std::log(b - a);
    Hints h{a, b, 0.5 * (a + b), (b - a) / std::sqrt(12.0), TailClass::compact, {0.5 * (a + b)}};
    return DensityPart(
        [a, b, c](double base, double offset) {
          const double z = base + offset;
          return (z >= a && z <= b) ? c : kNegInf;
        },
        weight, std::move(h), ParametricDensity{ParametricDensity::Family::uniform, a, b});
  }

  /// log(w * p(z)).
  double log_value(double base, double offset) const { return log_weight_ + log_density_(base, offset); }
  double log_value(double z) const { return log_value(z, 0.0); }
  double value(double z) const { return std::exp(log_value(z)); }

  /// Evaluates at a quadrature node, anchoring on the nearest piece end.
  double value(const numerics::QuadNode& n) const {
    if (std::isfinite(n.left) && n.from_left <= n.from_right) return std::exp(log_value(n.left, n.from_left));
    if (std::isfinite(n.right)) return std::exp(log_value(n.right, -n.from_right));
    return std::exp(log_value(n.z, 0.0));
  }

  double weight() const noexcept { return weight_; }
  const Hints& hints() const noexcept { return hints_; }
  const std::optional<ParametricDensity>& parametric() const noexcept { return parametric_; }

 private:
  LogDensity log_density_;
  double weight_;
  double log_weight_;
  Hints hints_;
  std::optional<ParametricDensity> parametric_;
};

/// nu = atoms + density part. Immutable; safe to share between threads.
class TerminalLaw {
 public:
  TerminalLaw() = default;

  TerminalLaw(std::vector<Atom> atoms, std::optional<DensityPart> density)
      : atoms_(std::move(atoms)), density_(std::move(density)) {
    for (const auto& a : atoms_) {
      if (!std::isfinite(a.location)) throw InvalidSpecError("terminal law: atom location must be finite");
      if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw InvalidSpecError("terminal law: atom weight must be >= 0");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& l, const Atom& r) { return l.location < r.location; });
    std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
    for (std::size_t i = 1; i < atoms_.size(); ++i) {
      if (atoms_[i].location == atoms_[i - 1].location) throw InvalidSpecError("terminal law: duplicate atom location");
    }
  }

  static TerminalLaw point_mass(double z) { return TerminalLaw({{z, 1.0}}, std::nullopt); }
  static TerminalLaw from_density(DensityPart d) { return TerminalLaw({}, std::move(d)); }

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  const std::optional<DensityPart>& density() const noexcept { return density_; }
  bool has_density() const noexcept { return density_.has_value(); }
  bool is_atomic() const noexcept { return !density_.has_value(); }

  double atom_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.weight;
    return m;
  }

  /// Smallest/largest point of the support.
  double ess_inf() const {
    double lo = kInf;
    if (!atoms_.empty()) lo = atoms_.front().location;
    if (density_) lo = std::min(lo, density_->hints().lower);
    return lo;
  }

  double ess_sup() const {
    double hi = kNegInf;
    if (!atoms_.empty()) hi = atoms_.back().location;
    if (density_) hi = std::max(hi, density_->hints().upper);
    return hi;
  }

  /// Sum_i v_i h(z_i) + int p(z) h(z) dz over (lo, hi). h receives a QuadNode in
  /// z coordinates; `breaks` (and lo, hi) become exact piece ends.
  template <class H>
  double integrate(H&& h, std::vector<double> breaks = {}, double lo = kNegInf, double hi = kInf,
                   const numerics::QuadratureOptions& opt = {}) const {
    double total = 0.0;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& a : atoms_) {
      if (a.location < lo || a.location > hi) continue;
      total += a.weight * h(numerics::QuadNode{a.location, nan, nan, nan, nan});
    }
    if (density_) {
      const auto& hints = density_->hints();
      const double a = std::max(lo, hints.lower);
      const double b = std::min(hi, hints.upper);
      if (a < b) {
        breaks.insert(breaks.end(), hints.breakpoints.begin(), hints.breakpoints.end());
        const auto& d = *density_;
        auto integrand = [&](const numerics::QuadNode& n) {
          const double p = d.value(n);
          if (p == 0.0) return 0.0;
          return p * h(n);
        };
        total += numerics::integrate(integrand, a, b, std::move(breaks), opt).value;
      }
    }
    return total;
  }

  double total_mass(const numerics::QuadratureOptions& opt = {}) const {
    return integrate([](const numerics::QuadNode&) { return 1.0; }, {}, kNegInf, kInf, opt);
  }

  double mean() const {
    return integrate([](const numerics::QuadNode& n) { return n.z; });
  }

  /// int z^q nu(dz); throws InfiniteMomentError when the tail test fails.
  double moment(int q) const {
    if (q < 0) throw DomainError("moment: order must be non-negative");
    if (!moment_finite(q)) throw InfiniteMomentError("terminal law: moment of order " + std::to_string(q) + " diverges");
    return integrate([q](const numerics::QuadNode& n) { return std::pow(n.z, q); });
  }

  /// Tail-decay test: |z|^(q+1) p(z) must fall by three orders of magnitude
  /// between the body and |z| ~ 1e12 scale units on every infinite side.
  bool moment_finite(int q) const {
    if (!density_) return true;
    const auto& h = density_->hints();
    auto side_ok = [&](double dir) {
      double peak = 0.0;
      double last = 0.0;
      for (int k = 0; k <= 40; ++k) {
        const double z = h.center + dir * h.scale * std::ldexp(1.0, k);
        if (z <= h.lower || z >= h.upper) return true;
        const double p = density_->value(z);
        const double s = p == 0.0 ? 0.0 : std::exp((q + 1.0) * std::log(std::abs(z)) + std::log(p));
        if (!std::isfinite(s)) return false;
        peak = std::max(peak, s);
        last = s;
      }
      return last <= 1e-3 * peak;
    };
    return side_ok(1.0) && side_ok(-1.0);
  }

 private:
  std::vector<Atom> atoms_;
  std::optional<DensityPart> density_;
};

/// Draws from a TerminalLaw. Closed-form density parts are sampled exactly;
/// other densities by numeric inversion of a tabulated CDF refined by root
/// finding (|F(x) - u| <= 1e-10).
class LawSampler {
 public:
  explicit LawSampler(TerminalLaw law) : law_(std::move(law)) {
    double acc = 0.0;
    for (const auto& a : law_.atoms()) {
      acc += a.weight;
      cumulative_atoms_.push_back(acc);
    }
    total_ = acc + (law_.density() ? law_.density()->weight() : 0.0);
    if (!(total_ > 0.0)) throw InvalidSpecError("law sampler: zero total mass");
    if (law_.density() && !law_.density()->parametric()) {
      const auto& d = *law_.density();
      const auto& h = d.hints();
      std::vector<double> knots(h.breakpoints.begin(), h.breakpoints.end());
      for (int k = -12; k <= 12; ++k) knots.push_back(h.center + 0.5 * k * h.scale);
      std::erase_if(knots, [&](double x) { return !(x > h.lower && x < h.upper); });
      knots.push_back(h.lower);
      knots.push_back(h.upper);
      table_.emplace(Density{&*law_.density()}, std::move(knots), h.scale);
    }
  }

  LawSampler(const LawSampler&) = delete;
  LawSampler& operator=(const LawSampler&) = delete;

  const TerminalLaw& law() const noexcept { return law_; }

  double draw(RandomStream& rng) const {
    const double u = rng.uniform() * total_;
    const auto it = std::upper_bound(cumulative_atoms_.begin(), cumulative_atoms_.end(), u);
    if (it != cumulative_atoms_.end() || !law_.density()) {
      const auto idx = it == cumulative_atoms_.end() ? cumulative_atoms_.size() - 1
                                                     : static_cast<std::size_t>(it - cumulative_atoms_.begin());
      return law_.atoms()[idx].location;
    }
    const auto& d = *law_.density();
    if (const auto& p = d.parametric()) {
      switch (p->family) {
        case ParametricDensity::Family::normal:
          return p->p1 + std::sqrt(p->p2) * rng.normal();
        case ParametricDensity::Family::gamma:
          return p->p2 * std::exp(rng.log_gamma_variate(p->p1));
        case ParametricDensity::Family::uniform:
          return p->p1 + (p->p2 - p->p1) * rng.uniform();
      }
    }
    return table_->quantile(rng.uniform());
  }

 private:
  struct Density {
    const DensityPart* part;
    double operator()(const numerics::QuadNode& n) const { return part->value(n); }
  };

  TerminalLaw law_;
  std::vector<double> cumulative_atoms_;
  double total_ = 0.0;
  std::optional<numerics::CdfTable<Density>> table_;
};

}  // namespace lrb
