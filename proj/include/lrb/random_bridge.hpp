#pragma once

// The Levy random bridge law LRB([0,T], {f_t}, nu): the psi aggregates,
// Markov transition laws, conditional terminal laws and moments, the measure
// change to the driving Levy process, restarts (dynamic consistency) and the
// Liouville-type joint laws of increments.
//
// Key identities (continuous class; the discrete class swaps f for Q):
//   psi_t(dz; xi)   = f_{T-t}(z - xi) / f_T(z) nu(dz),  psi_0 = nu
//   P[L_t in dy | L_s = x] = psi_t(R; y) / psi_s(R; x) f_{t-s}(y - x) dy
//   nu_s(dz)        = psi_s(dz; xi) / psi_s(R; xi)
//   joint increments  f~(sum y) prod f_{alpha_i}(y_i),  f~ = nu / f_T

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "lrb/bridge.hpp"
#include "lrb/errors.hpp"
#include "lrb/kernels.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/numerics/special.hpp"
#include "lrb/terminal_law.hpp"

namespace lrb {

/// (kernel, horizon T, terminal law nu).
struct LrbSpec {
  Kernel kernel = Kernel::brownian();
  double horizon = 1.0;
  TerminalLaw terminal;

  /// Structural checks of the LRB definition: 0 < f_T(z) < inf on the
  /// support of nu (Q_T(a) > 0 for discrete kernels) and unit total mass.
  void validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidSpecError("lrb: horizon must be positive and finite");
    const auto fT = kernel.at(horizon);
    for (const auto& a : terminal.atoms()) {
      if (!std::isfinite(fT.log_likelihood(a.location))) {
        std::ostringstream os;
        os << "lrb: atom at " << a.location << " has f_T = 0 (not reachable by the " << kernel.name() << " kernel)";
        throw InvalidSpecError(os.str());
      }
    }
    double mass = terminal.atom_mass();
    if (const auto& d = terminal.density()) {
      if (kernel.is_discrete()) throw InvalidSpecError("lrb: a discrete kernel needs an atomic terminal law");
      if (d->hints().lower < kernel.support_lower()) {
        throw InvalidSpecError("lrb: terminal density puts mass where f_T vanishes");
      }
      if (d->parametric()) {
        mass += d->weight();
      } else {
        mass += terminal.integrate([](const numerics::QuadNode&) { return 1.0; });
      }
    }
    const double tol = terminal.density() && !terminal.density()->parametric() ? 1e-9 : 1e-10;
    if (std::abs(mass - 1.0) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << "lrb: terminal law has total mass " << mass;
      throw InvalidSpecError(os.str());
    }
  }
};

inline LrbSpec make_lrb(Kernel kernel, double horizon, TerminalLaw terminal) {
  LrbSpec spec{kernel, horizon, std::move(terminal)};
  spec.validate();
  return spec;
}

/// The "no information" terminal law nu = f_T dz (or Q_T); the LRB is then
/// identical in law to the driving Levy process. Poisson mass is truncated
/// where the tail drops below 1e-17.
inline TerminalLaw levy_terminal_law(const Kernel& kernel, double horizon) {
  switch (kernel.family()) {
    case KernelFamily::brownian:
      return TerminalLaw::from_density(DensityPart::normal(0.0, horizon));
    case KernelFamily::gamma:
      return TerminalLaw::from_density(DensityPart::gamma(kernel.parameter() * horizon, 1.0));
    case KernelFamily::poisson: {
      std::vector<Atom> atoms;
      double acc = 0.0;
      const double mean = kernel.parameter() * horizon;
      for (std::int64_t i = 0;; ++i) {
        const double p = kernel.mass(horizon, i);
        atoms.push_back({static_cast<double>(i), p});
        acc += p;
        if (static_cast<double>(i) > mean && 1.0 - acc < 1e-17) break;
      }
      for (auto& a : atoms) a.weight /= acc;
      return TerminalLaw(std::move(atoms), std::nullopt);
    }
  }
  return {};
}

/// z -> f_{T-t}(z - xi) / f_T(z) for fixed (t, xi), with the integration
/// window and breakpoints that make psi-type integrals accurate.
class TerminalTilt {
 public:
  TerminalTilt(const LrbSpec& spec, double t, double xi)
      : spec_(&spec), t_(t), xi_(xi), remain_(spec.kernel.at(spec.horizon - t)), full_(spec.kernel.at(spec.horizon)) {
    if (!(t >= 0.0) || !(t < spec.horizon)) throw DomainError("lrb: time must lie in [0, T)");
    if (!std::isfinite(xi)) throw DomainError("lrb: non-finite state");
  }

  double log_value(double from_xi, double z) const {
    if (t_ == 0.0) return 0.0;
    return remain_.log_likelihood(from_xi) - full_.log_likelihood(z);
  }

  double operator()(const numerics::QuadNode& n) const {
    if (t_ == 0.0) return 1.0;
    const double l = log_value(n.offset_from(xi_), n.offset_from(0.0));
    return std::isfinite(l) ? std::exp(l) : 0.0;
  }

  double lower() const {
    if (t_ == 0.0 || !spec_->kernel.is_subordinator()) return kNegInf;
    return std::max(xi_, 0.0);
  }

  std::vector<double> breakpoints() const {
    std::vector<double> b{xi_};
    if (t_ == 0.0) return b;
    const double rem = spec_->horizon - t_;
    if (spec_->kernel.family() == KernelFamily::brownian) {
      const double sd = std::sqrt(rem);
      for (double k : {-12.0, -8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0, 12.0}) b.push_back(xi_ + k * sd);
    } else {
      b.push_back(0.0);
      const double mean = spec_->kernel.increment_mean(rem);
      const double sd = std::sqrt(spec_->kernel.increment_variance(rem));
      for (double k : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) b.push_back(xi_ + mean + k * sd);
      b.push_back(xi_ + 0.1 * mean);
    }
    return b;
  }

  /// int g(z) psi_t(dz; xi) for a node-aware g.
  template <class G>
  double integrate(G&& g, const numerics::QuadratureOptions& opt = {}) const {
    auto tilted = [&](const numerics::QuadNode& n) {
      const double w = (*this)(n);
      return w == 0.0 ? 0.0 : w * g(n);
    };
    const auto& law = spec_->terminal;
    const double c = spec_->kernel.parameter() * (spec_->horizon - t_);
    if (t_ == 0.0 || spec_->kernel.family() != KernelFamily::gamma || c >= 1.0 || !law.density()) {
      return law.integrate(tilted, breakpoints(), lower(), kInf, opt);
    }
    // (z - xi)^(c - 1) with small c: on [xi, xi + c] integrate in v = (z - xi)^c,
    // where that factor and the Jacobian cancel.
    const double a = lower();
    const double cut = a + c;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    double total = 0.0;
    for (const auto& atom : law.atoms()) {
      if (atom.location >= a && atom.location < cut) {
        total += atom.weight * tilted(numerics::QuadNode{atom.location, nan, nan, nan, nan});
      }
    }
    const auto& d = *law.density();
    const double lo = std::max(a, d.hints().lower), hi = std::min(cut, d.hints().upper);
    if (lo < hi) {
      std::vector<double> vb;
      for (double b : d.hints().breakpoints) {
        if (b > lo && b < hi) vb.push_back(std::pow(b - xi_, c));
      }
      const double log_c = std::log(c);
      auto in_v = [&](double v) {
        const double w = std::pow(v, 1.0 / c);
        if (!(w > 0.0)) return 0.0;
        const double z = xi_ + w;
        const numerics::QuadNode n{z, xi_, w, kInf, kInf};
        const double l = log_value(w, z) + (1.0 - c) * std::log(w) - log_c;
        if (!std::isfinite(l)) return 0.0;
        const double p = d.value(n);
        return p == 0.0 ? 0.0 : std::exp(l) * p * g(n);
      };
      total += numerics::quad(in_v, std::pow(lo - xi_, c), std::pow(hi - xi_, c), std::move(vb), opt);
    }
    return total + law.integrate(tilted, breakpoints(), cut, kInf, opt);
  }

 private:
  const LrbSpec* spec_;
  double t_;
  double xi_;
  KernelSlice remain_;
  KernelSlice full_;
};

/// psi_t(R; xi) by quadrature over the terminal law.
inline double psi_total_numeric(const LrbSpec& spec, double t, double xi, const numerics::QuadratureOptions& opt = {}) {
  if (t == 0.0) return 1.0;
  const TerminalTilt tilt(spec, t, xi);
  const double v = tilt.integrate([](const numerics::QuadNode&) { return 1.0; }, opt);
  if (!std::isfinite(v)) throw NumericError("psi_total: non-finite result");
  return v;
}

namespace detail {

struct TiltedPart {
  double mass;  // int f_{T-t}(z - xi) / f_T(z) p(z) dz
  double mean;  // mean of the normalised tilted density
};

// Closed forms for the parametric densities that admit one: Brownian with
// normal or uniform p, gamma with gamma(mT, theta).
inline std::optional<TiltedPart> parametric_tilt(const LrbSpec& spec, const ParametricDensity& p, double t, double xi) {
  using F = ParametricDensity::Family;
  const double T = spec.horizon, rem = T - t;
  if (spec.kernel.family() == KernelFamily::brownian) {
    // exp(-A z^2 + B z + C) after completing the square
    double A = t / (2.0 * T * rem), B = xi / rem, C = -xi * xi / (2.0 * rem);
    const double pre = std::sqrt(T / rem);
    if (p.family == F::normal) {
      A += 1.0 / (2.0 * p.p2);
      B += p.p1 / p.p2;
      C -= p.p1 * p.p1 / (2.0 * p.p2);
      const double mass = pre / std::sqrt(2.0 * std::numbers::pi * p.p2) * std::sqrt(std::numbers::pi / A) *
                          std::exp(B * B / (4.0 * A) + C);
      return TiltedPart{mass, B / (2.0 * A)};
    }
    if (p.family == F::uniform) {
      const double c = B / (2.0 * A), r = std::sqrt(2.0 * A);
      const double lo = r * (p.p1 - c), hi = r * (p.p2 - c);
      const double prob = lo > 0.0 ? numerics::normal_cdf(-lo) - numerics::normal_cdf(-hi)
                                    : numerics::normal_cdf(hi) - numerics::normal_cdf(lo);
      if (!(prob > 0.0)) return std::nullopt;
      const double mass =
          pre / (p.p2 - p.p1) * std::sqrt(std::numbers::pi / A) * std::exp(B * B / (4.0 * A) + C) * prob;
      const double mean = c + (numerics::normal_pdf(lo) - numerics::normal_pdf(hi)) / (prob * r);
      return TiltedPart{mass, std::clamp(mean, p.p1, p.p2)};
    }
    return std::nullopt;
  }
  if (spec.kernel.family() == KernelFamily::gamma && p.family == F::gamma && xi >= 0.0) {
    const double m = spec.kernel.parameter(), mT = m * T;
    if (std::abs(p.p1 - mT) > 1e-14 * mT) return std::nullopt;
    // z - xi ~ gamma(m(T - t), theta)
    const double theta = p.p2;
    return TiltedPart{std::exp(-m * t * std::log(theta) + xi * (1.0 - 1.0 / theta)), xi + m * rem * theta};
  }
  return std::nullopt;
}

}  // namespace detail

namespace detail {

struct PsiMoments {
  double psi;
  double first;  // int z psi_t(dz; xi)
};

inline std::optional<PsiMoments> parametric_psi(const LrbSpec& spec, double t, double xi) {
  const auto& d = spec.terminal.density();
  if (!d || !d->parametric()) return std::nullopt;
  if (!(t < spec.horizon) || !std::isfinite(xi)) throw DomainError("lrb: time must lie in [0, T)");
  const auto part = parametric_tilt(spec, *d->parametric(), t, xi);
  if (!part) return std::nullopt;
  const TerminalTilt tilt(spec, t, xi);
  PsiMoments out{d->weight() * part->mass, d->weight() * part->mass * part->mean};
  for (const auto& a : spec.terminal.atoms()) {
    const double l = tilt.log_value(a.location - xi, a.location);
    if (!std::isfinite(l)) continue;
    out.psi += a.weight * std::exp(l);
    out.first += a.weight * std::exp(l) * a.location;
  }
  if (!std::isfinite(out.psi) || !std::isfinite(out.first)) throw NumericError("psi_total: non-finite result");
  return out;
}

}  // namespace detail

/// psi_t(R; xi): total mass of the un-normalised conditional terminal measure.
/// Closed form when the absolutely continuous part allows it.
inline double psi_total(const LrbSpec& spec, double t, double xi, const numerics::QuadratureOptions& opt = {}) {
  if (t == 0.0) return 1.0;
  if (const auto p = detail::parametric_psi(spec, t, xi)) return p->psi;
  return psi_total_numeric(spec, t, xi, opt);
}

namespace detail {

inline double reachable_psi(const LrbSpec& spec, double s, double x, const numerics::QuadratureOptions& opt = {}) {
  const double p = psi_total(spec, s, x, opt);
  if (!(p > 0.0) || !std::isfinite(p)) {
    std::ostringstream os;
    os << "lrb: state " << x << " at time " << s << " is unreachable (psi = " << p << ")";
    throw UnreachableStateError(os.str());
  }
  return p;
}

// nu_s for an atomic nu, normalised in log space so that states far out in
// the tails (where psi itself underflows) stay usable.
inline std::vector<Atom> atomic_posterior(const LrbSpec& spec, double s, double xi) {
  const TerminalTilt tilt(spec, s, xi);
  std::vector<double> logs;
  double top = kNegInf;
  for (const auto& a : spec.terminal.atoms()) {
    logs.push_back(std::log(a.weight) + tilt.log_value(a.location - xi, a.location));
    top = std::max(top, logs.back());
  }
  if (!std::isfinite(top)) {
    std::ostringstream os;
    os << "lrb: state " << xi << " at time " << s << " is unreachable";
    throw UnreachableStateError(os.str());
  }
  double total = 0.0;
  for (double l : logs) total += std::exp(l - top);
  std::vector<Atom> out;
  const auto atoms = spec.terminal.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double w = std::exp(logs[i] - top) / total;
    if (w > 0.0) out.push_back({atoms[i].location, w});
  }
  return out;
}

}  // namespace detail

/// Markov transition density (mass for discrete kernels) from (s, x) to (t, y),
/// 0 <= s < t < T. The time-T transition is the conditional terminal law; ask
/// terminal_posterior for it.
inline double lrb_transition_density(const LrbSpec& spec, double s, double x, double t, double y,
                                     const numerics::QuadratureOptions& opt = {}) {
  if (t >= spec.horizon) throw DomainError("lrb_transition_density: t = T is the terminal law; use terminal_posterior");
  if (!(s >= 0.0) || !(s < t)) throw DomainError("lrb_transition_density: need 0 <= s < t < T");
  const double psi_s = detail::reachable_psi(spec, s, x, opt);
  const double step = spec.kernel.likelihood(t - s, y - x);
  if (step == 0.0) return 0.0;
  return psi_total(spec, t, y, opt) / psi_s * step;
}

/// Marginal density (mass) of L_tT for 0 < t < T: f_t(x) psi_t(R; x).
inline double lrb_marginal_density(const LrbSpec& spec, double t, double x) {
  const double f = spec.kernel.likelihood(t, x);
  return f == 0.0 ? 0.0 : f * psi_total(spec, t, x);
}

/// Joint density of (L_{t_1}, ..., L_{t_n}) conditional on L_s = x_s, with
/// s < t_1 < ... < t_n < T: prod f(increments) psi_{t_n}(R; x_n) / psi_s(R; x_s).
inline double conditional_fdd(const LrbSpec& spec, double s, double xs, std::span<const double> times,
                              std::span<const double> values, const numerics::QuadratureOptions& opt = {}) {
  if (times.size() != values.size() || times.empty()) throw DomainError("fdd: need matching non-empty grids");
  double prev_t = s, prev_x = xs;
  double log_f = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > prev_t)) throw DomainError("fdd: times must be increasing");
    const double l = spec.kernel.at(times[i] - prev_t).log_likelihood(values[i] - prev_x);
    if (!std::isfinite(l)) return 0.0;
    log_f += l;
    prev_t = times[i];
    prev_x = values[i];
  }
  if (prev_t >= spec.horizon) throw DomainError("fdd: times must be below T");
  const double psi_s = detail::reachable_psi(spec, s, xs, opt);
  return std::exp(log_f) * psi_total(spec, prev_t, prev_x, opt) / psi_s;
}

/// nu_s: the conditional law of L_TT given L_sT = xi.
inline TerminalLaw terminal_posterior(const LrbSpec& spec, double s, double xi) {
  if (!(s >= 0.0) || !(s < spec.horizon)) throw DomainError("terminal_posterior: need 0 <= s < T");
  if (s == 0.0) return spec.terminal;
  if (spec.terminal.is_atomic()) return TerminalLaw(detail::atomic_posterior(spec, s, xi), std::nullopt);
  const double psi = detail::reachable_psi(spec, s, xi);
  const double log_psi = std::log(psi);
  const TerminalTilt tilt(spec, s, xi);

  std::vector<Atom> atoms;
  for (const auto& a : spec.terminal.atoms()) {
    const double l = tilt.log_value(a.location - xi, a.location);
    if (std::isfinite(l)) atoms.push_back({a.location, a.weight * std::exp(l - log_psi)});
  }

  std::optional<DensityPart> density;
  if (const auto& prior = spec.terminal.density()) {
    const double lower = std::max(prior->hints().lower, tilt.lower());
    const double upper = prior->hints().upper;
    if (lower < upper) {
      const KernelSlice remain = spec.kernel.at(spec.horizon - s);
      const KernelSlice full = spec.kernel.at(spec.horizon);
      const DensityPart prior_copy = *prior;
      auto log_p = [prior_copy, remain, full, xi, log_psi](double base, double offset) {
        const double lp = prior_copy.log_value(base, offset);
        if (!std::isfinite(lp)) return kNegInf;
        const double from_xi = (base - xi) + offset;
        const double z = base + offset;
        const double l = remain.log_likelihood(from_xi) - full.log_likelihood(z);
        if (!std::isfinite(l)) return kNegInf;
        return l + lp - log_psi;
      };
      std::vector<double> breaks = tilt.breakpoints();
      breaks.insert(breaks.end(), prior->hints().breakpoints.begin(), prior->hints().breakpoints.end());
      if (std::isfinite(lower)) breaks.push_back(lower);

      // Posterior mass, mean and spread of the density part (for hints).
      auto moment = [&](int q) {
        return numerics::integrate(
                   [&](const numerics::QuadNode& n) {
                     const double lb = std::isfinite(n.left) && n.from_left <= n.from_right ? n.left : n.right;
                     const double off = lb == n.left ? n.from_left : -n.from_right;
                     const double v = log_p(std::isfinite(lb) ? lb : n.z, std::isfinite(lb) ? off : 0.0);
                     return std::isfinite(v) ? std::exp(v) * std::pow(n.z, q) : 0.0;
                   },
                   lower, upper, breaks)
            .value;
      };
      const double w = moment(0);
      if (w > 0.0) {
        const double mean = moment(1) / w;
        const double var = std::max(moment(2) / w - mean * mean, 0.0);
        DensityPart::Hints hints;
        hints.lower = lower;
        hints.upper = upper;
        hints.center = mean;
        hints.scale = var > 0.0 ? std::sqrt(var) : prior->hints().scale;
        hints.tail = prior->hints().tail;
        hints.breakpoints = breaks;
        for (double k : {-4.0, -2.0, -1.0, 1.0, 2.0, 4.0}) hints.breakpoints.push_back(mean + k * hints.scale);
        // The part's own weight is carried inside log_p; normalise the
        // wrapper to weight w so log_value stays consistent.
        const double log_w = std::log(w);
        density.emplace([log_p, log_w](double base, double offset) { return log_p(base, offset) - log_w; }, w,
                        std::move(hints));
      }
    }
  }
  return TerminalLaw(std::move(atoms), std::move(density));
}

/// int z^q nu_s(dz), after a tail-decay test for finiteness.
inline double conditional_moment(const LrbSpec& spec, double s, double xi, int q) {
  if (q < 1) throw DomainError("conditional_moment: order must be a positive integer");
  return terminal_posterior(spec, s, xi).moment(q);
}

/// E[L_TT | L_sT = xi] without materialising nu_s.
inline double posterior_mean(const LrbSpec& spec, double s, double xi, const numerics::QuadratureOptions& opt = {}) {
  if (s == 0.0) return spec.terminal.mean();
  if (spec.terminal.is_atomic()) {
    double m = 0.0;
    for (const auto& a : detail::atomic_posterior(spec, s, xi)) m += a.weight * a.location;
    return m;
  }
  if (const auto p = detail::parametric_psi(spec, s, xi)) {
    if (!(p->psi > 0.0)) throw UnreachableStateError("posterior_mean: unreachable state");
    return p->first / p->psi;
  }
  const TerminalTilt tilt(spec, s, xi);
  if (const auto& d = spec.terminal.density(); d && !d->parametric() && !spec.terminal.moment_finite(1)) {
    throw InfiniteMomentError("posterior_mean: terminal law has no first moment");
  }
  const double psi = tilt.integrate([](const numerics::QuadNode&) { return 1.0; }, opt);
  if (!(psi > 0.0) || !std::isfinite(psi)) throw UnreachableStateError("posterior_mean: unreachable state");
  const double m = tilt.integrate([](const numerics::QuadNode& n) { return n.z; }, opt);
  return m / psi;
}

/// E[L_tT | L_sT = xi] = ((T-t) xi + (t-s) E[L_TT | L_sT = xi]) / (T-s).
inline double conditional_mean_at(const LrbSpec& spec, double s, double xi, double t) {
  if (!(s >= 0.0) || !(s < t) || !(t <= spec.horizon)) throw DomainError("conditional_mean_at: need 0 <= s < t <= T");
  const double T = spec.horizon;
  return ((T - t) * xi + (t - s) * posterior_mean(spec, s, xi)) / (T - s);
}

/// dP_L/dQ on F_t: psi_t(R; xi)^-1.
inline double rn_derivative(const LrbSpec& spec, double t, double xi) {
  return 1.0 / detail::reachable_psi(spec, t, xi);
}

/// The re-based process eta_u = L_{s+u, T} - xi on [0, T - s] is an LRB with
/// terminal law nu*(A) = nu_s(A + xi).
inline LrbSpec restart(const LrbSpec& spec, double s, double xi) {
  if (s == 0.0 && xi == 0.0) return spec;
  const TerminalLaw post = terminal_posterior(spec, s, xi);
  std::vector<Atom> atoms;
  for (const auto& a : post.atoms()) atoms.push_back({a.location - xi, a.weight});
  std::optional<DensityPart> density;
  if (const auto& d = post.density()) {
    const DensityPart src = *d;
    DensityPart::Hints hints = d->hints();
    hints.lower -= xi;
    hints.upper -= xi;
    hints.center -= xi;
    for (auto& b : hints.breakpoints) b -= xi;
    hints.breakpoints.push_back(0.0);
    const double log_w = std::log(d->weight());
    density.emplace(
        [src, xi, log_w](double base, double offset) { return src.log_value(base + xi, offset) - log_w; },
        d->weight(), std::move(hints));
  }
  return LrbSpec{spec.kernel, spec.horizon - s, TerminalLaw(std::move(atoms), std::move(density))};
}

/// Joint law of increments over a partition of [0, T]. For a continuous
/// kernel `density` is the joint density from the absolutely continuous part
/// of nu and each atom z_k contributes the density of the first n-1
/// increments jointly with the event {sum = z_k}. For a discrete kernel
/// `density` holds the joint probability mass.
struct IncrementDensity {
  struct AtomTerm {
    double location;
    double value;
  };
  double density = 0.0;
  std::vector<AtomTerm> atoms;
};

namespace detail {

inline void check_partition(const LrbSpec& spec, std::span<const double> alphas) {
  if (alphas.empty()) throw DomainError("increments: empty partition");
  double sum = 0.0;
  for (double a : alphas) {
    if (!(a > 0.0)) throw DomainError("increments: partition lengths must be positive");
    sum += a;
  }
  if (std::abs(sum - spec.horizon) > 1e-12 * std::max(1.0, spec.horizon)) {
    throw DomainError("increments: partition must sum to T");
  }
}

// f~ weighted Liouville value: log( prod f_{alpha_i}(y_i) ) over the given
// pairs, plus the atom/density factor at `total`.
inline IncrementDensity liouville(const LrbSpec& spec, std::span<const double> alphas, std::span<const double> ys,
                                  double prefix, double log_scale) {
  IncrementDensity out;
  const auto fT = spec.kernel.at(spec.horizon);
  const std::size_t n = ys.size();
  double log_head = log_scale;  // all but the last factor
  for (std::size_t i = 0; i + 1 < n; ++i) log_head += spec.kernel.at(alphas[i]).log_likelihood(ys[i]);
  const auto last = spec.kernel.at(alphas[n - 1]);
  const double head_sum = prefix + std::accumulate(ys.begin(), ys.end() - 1, 0.0);
  const double total = head_sum + ys[n - 1];

  if (spec.kernel.is_discrete()) {
    for (const auto& a : spec.terminal.atoms()) {
      if (std::abs(a.location - total) > 1e-9) continue;
      const double l = log_head + last.log_likelihood(ys[n - 1]) + std::log(a.weight) - fT.log_likelihood(a.location);
      if (std::isfinite(l)) out.density = std::exp(l);
    }
    return out;
  }
  if (const auto& d = spec.terminal.density()) {
    const double l = log_head + last.log_likelihood(ys[n - 1]) + d->log_value(total) - fT.log_likelihood(total);
    out.density = std::isfinite(l) ? std::exp(l) : 0.0;
  }
  for (const auto& a : spec.terminal.atoms()) {
    const double l = log_head + last.log_likelihood(a.location - head_sum) + std::log(a.weight) -
                     fT.log_likelihood(a.location);
    out.atoms.push_back({a.location, std::isfinite(l) ? std::exp(l) : 0.0});
  }
  return out;
}

}  // namespace detail

/// Joint density of the increments (Delta_1, ..., Delta_n) over the partition
/// with lengths alphas (sum T), evaluated at ys.
inline IncrementDensity increment_joint_density(const LrbSpec& spec, std::span<const double> alphas,
                                                std::span<const double> ys) {
  detail::check_partition(spec, alphas);
  if (ys.size() != alphas.size()) throw DomainError("increments: need one value per partition interval");
  return detail::liouville(spec, alphas, ys, 0.0, 0.0);
}

/// Conditional joint density of the increments Delta_{pi(m+1..n)} at `query`
/// given Delta_{pi(1..m)} = `observed`. Depends on the observations only
/// through their sum S and total length t^pi_m:
///   f~(S + sum query) / psi_{t^pi_m}(R; S) prod f_{alpha_pi(i)}(query_i).
/// `permutation` is 0-based.
inline IncrementDensity reordered_increment_conditional(const LrbSpec& spec, std::span<const double> alphas,
                                                        std::span<const std::size_t> permutation,
                                                        std::span<const double> observed,
                                                        std::span<const double> query) {
  detail::check_partition(spec, alphas);
  const std::size_t n = alphas.size();
  if (permutation.size() != n) throw DomainError("increments: permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (auto p : permutation) {
    if (p >= n || seen[p]) throw DomainError("increments: not a permutation");
    seen[p] = true;
  }
  const std::size_t m = observed.size();
  if (m + query.size() != n || query.empty()) throw DomainError("increments: need m observed and n - m > 0 queried");
  double sum = 0.0, elapsed = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sum += observed[i];
    elapsed += alphas[permutation[i]];
  }
  if (m == 0) elapsed = 0.0;
  const double psi = detail::reachable_psi(spec, elapsed, sum);
  std::vector<double> qa(query.size());
  for (std::size_t i = 0; i < query.size(); ++i) qa[i] = alphas[permutation[m + i]];
  return detail::liouville(spec, qa, query, sum, -std::log(psi));
}

/// Least-squares fit log psi_t(R; y) ~ a + b y + c t over a grid, used to test
/// the independent-increments criterion psi_t(R; y) = a exp(by + ct).
struct AffineLogPsiFit {
  double log_a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double max_residual = 0.0;
};

inline AffineLogPsiFit fit_affine_log_psi(const LrbSpec& spec, std::span<const double> ts, std::span<const double> ys) {
  std::vector<std::array<double, 3>> rows;
  std::vector<double> rhs;
  for (double t : ts) {
    for (double y : ys) {
      rows.push_back({1.0, y, t});
      rhs.push_back(std::log(psi_total(spec, t, y)));
    }
  }
  if (rows.size() < 3) throw DomainError("fit_affine_log_psi: need at least three grid points");
  // Normal equations, solved by Gaussian elimination with partial pivoting.
  double A[3][4] = {};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) A[i][j] += rows[k][i] * rows[k][j];
      A[i][3] += rows[k][i] * rhs[k];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    for (int j = 0; j < 4; ++j) std::swap(A[col][j], A[piv][j]);
    if (A[col][col] == 0.0) throw NumericError("fit_affine_log_psi: singular design");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = A[r][col] / A[col][col];
      for (int j = col; j < 4; ++j) A[r][j] -= f * A[col][j];
    }
  }
  AffineLogPsiFit fit{A[0][3] / A[0][0], A[1][3] / A[1][1], A[2][3] / A[2][2], 0.0};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double pred = fit.log_a + fit.b * rows[k][1] + fit.c * rows[k][2];
    fit.max_residual = std::max(fit.max_residual, std::abs(pred - rhs[k]));
  }
  return fit;
}

}  // namespace lrb
