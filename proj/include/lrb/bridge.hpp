#pragma once

// Levy bridges: transition laws of the driving process pinned at (T, z),
// started from (s, x), and exact/numeric bridge-path samplers.

#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <vector>

#include "lrb/errors.hpp"
#include "lrb/kernels.hpp"
#include "lrb/numerics/inversion.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/numerics/special.hpp"
#include "lrb/random.hpp"

namespace lrb {

/// Ordered (time, value) pairs of one realised trajectory.
struct SamplePath {
  std::vector<double> times;
  std::vector<double> values;
};

struct BridgeSpec {
  Kernel kernel;
  double s = 0.0;  // start time
  double x = 0.0;  // start value
  double T = 1.0;  // pin time
  double z = 0.0;  // pin value

  /// Throws DomainError when s >= T and InvalidPinError when the pin has zero
  /// (or infinite) likelihood f_{T-s}(z-x) / Q_{T-s}(z-x).
  void validate() const {
    if (!(s >= 0.0) || !(s < T) || !std::isfinite(T)) throw DomainError("bridge: need 0 <= s < T");
    if (!std::isfinite(x) || !std::isfinite(z)) throw DomainError("bridge: non-finite start or pin value");
    const double l = kernel.at(T - s).log_likelihood(z - x);
    if (!std::isfinite(l)) {
      std::ostringstream os;
      os << "bridge: pin (" << T << ", " << z << ") unreachable from (" << s << ", " << x << ")";
      throw InvalidPinError(os.str());
    }
  }
};

/// The time-t marginal of a bridge with frozen kernel slices.
class BridgeMarginal {
 public:
  BridgeMarginal(const BridgeSpec& spec, double t)
      : spec_(spec),
        t_(t),
        head_(spec.kernel.at(check_time(spec, t) - spec.s)),
        tail_(spec.kernel.at(spec.T - t)) {
    spec_.validate();
    log_norm_ = spec.kernel.at(spec.T - spec.s).log_likelihood(spec.z - spec.x);
  }

  /// Bridge density at y given the exact increments y - x and z - y.
  double density_from_increments(double from_start, double to_pin) const {
    const double l = head_.log_likelihood(from_start) + tail_.log_likelihood(to_pin) - log_norm_;
    return std::exp(l);
  }

  double density(double y) const { return density_from_increments(y - spec_.x, spec_.z - y); }

  /// Node-aware density: the increments come straight from the stored offsets
  /// when x or z is a piece end.
  double density(const numerics::QuadNode& n) const {
    return density_from_increments(n.offset_from(spec_.x), -n.offset_from(spec_.z));
  }

  /// Support of the marginal (open interval).
  double lower() const { return spec_.kernel.is_subordinator() ? spec_.x : kNegInf; }
  double upper() const { return spec_.kernel.is_subordinator() ? spec_.z : kInf; }

  double mean_hint() const { return spec_.x + (t_ - spec_.s) / (spec_.T - spec_.s) * (spec_.z - spec_.x); }

  double scale_hint() const {
    const double frac = (t_ - spec_.s) / (spec_.T - spec_.s);
    if (spec_.kernel.family() == KernelFamily::brownian) return std::sqrt((t_ - spec_.s) * (1.0 - frac));
    return std::max((spec_.z - spec_.x) * std::sqrt(frac * (1.0 - frac)), 1e-12);
  }

  /// Quadrature breakpoints covering the body of the marginal.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    if (spec_.kernel.is_subordinator()) {
      const double w = spec_.z - spec_.x;
      for (double f : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) b.push_back(spec_.x + f * w);
    } else {
      const double m = mean_hint();
      const double sd = scale_hint();
      for (double k : {-12.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 12.0}) b.push_back(m + k * sd);
    }
    return b;
  }

  /// P[bridge_t in (a, b)] by quadrature of the density.
  double probability(double a, double b, const numerics::QuadratureOptions& opt = {}) const {
    a = std::max(a, lower());
    b = std::min(b, upper());
    if (!(a < b)) return 0.0;
    auto breaks = breakpoints();
    if (spec_.kernel.is_subordinator()) {
      breaks.push_back(spec_.x);
      breaks.push_back(spec_.z);
    }
    return numerics::integrate([this](const numerics::QuadNode& n) { return density(n); }, a, b, std::move(breaks),
                               opt)
        .value;
  }

 private:
  static double check_time(const BridgeSpec& spec, double t) {
    if (!(t > spec.s && t < spec.T)) throw DomainError("bridge: t must lie strictly between s and T");
    return t;
  }

  BridgeSpec spec_;
  double t_;
  KernelSlice head_;
  KernelSlice tail_;
  double log_norm_ = 0.0;
};

/// f_{t-s}(y-x) f_{T-t}(z-y) / f_{T-s}(z-x).
inline double bridge_transition_density(const BridgeSpec& spec, double t, double y) {
  if (!spec.kernel.is_continuous()) throw ClassMismatchError("bridge_transition_density requires a continuous kernel");
  return BridgeMarginal(spec, t).density(y);
}

/// Q_{t-s}(a_j-a_i) Q_{T-t}(a_k-a_j) / Q_{T-s}(a_k-a_i) with a_i = x, a_k = z.
inline double bridge_transition_mass(const BridgeSpec& spec, double t, std::int64_t j) {
  if (!spec.kernel.is_discrete()) throw ClassMismatchError("bridge_transition_mass requires a discrete kernel");
  return BridgeMarginal(spec, t).density(static_cast<double>(j));
}

/// Closed-form distribution function of the time-t bridge marginal:
/// Brownian -> normal, gamma -> scaled beta, Poisson -> binomial.
inline double bridge_cdf_closed_form(const BridgeSpec& spec, double t, double y) {
  spec.validate();
  if (!(t > spec.s && t < spec.T)) throw DomainError("bridge: t must lie strictly between s and T");
  const double frac = (t - spec.s) / (spec.T - spec.s);
  switch (spec.kernel.family()) {
    case KernelFamily::brownian: {
      const double mean = spec.x + frac * (spec.z - spec.x);
      const double var = (t - spec.s) * (spec.T - t) / (spec.T - spec.s);
      return numerics::normal_cdf((y - mean) / std::sqrt(var));
    }
    case KernelFamily::gamma: {
      if (y <= spec.x) return 0.0;
      if (y >= spec.z) return 1.0;
      const double m = spec.kernel.parameter();
      return numerics::incomplete_beta((y - spec.x) / (spec.z - spec.x), m * (t - spec.s), m * (spec.T - t));
    }
    case KernelFamily::poisson: {
      const auto n = static_cast<std::int64_t>(std::llround(spec.z - spec.x));
      const double k = std::floor(y - spec.x + 1e-9);
      if (k < 0) return 0.0;
      if (k >= n) return 1.0;
      // P[Bin(n, frac) <= k] = I(1 - frac; n - k, k + 1)
      return numerics::incomplete_beta(1.0 - frac, static_cast<double>(n) - k, k + 1.0);
    }
  }
  return 0.0;
}

namespace detail {

inline double exact_bridge_step(const BridgeSpec& spec, double t, RandomStream& rng) {
  const double frac = (t - spec.s) / (spec.T - spec.s);
  switch (spec.kernel.family()) {
    case KernelFamily::brownian: {
      const double mean = spec.x + frac * (spec.z - spec.x);
      const double var = (t - spec.s) * (spec.T - t) / (spec.T - spec.s);
      return mean + std::sqrt(var) * rng.normal();
    }
    case KernelFamily::gamma: {
      const double m = spec.kernel.parameter();
      return spec.x + (spec.z - spec.x) * rng.beta(m * (t - spec.s), m * (spec.T - t));
    }
    case KernelFamily::poisson: {
      const auto n = static_cast<std::int64_t>(std::llround(spec.z - spec.x));
      return spec.x + static_cast<double>(rng.binomial(n, frac));
    }
  }
  return spec.x;
}

inline void check_grid(const BridgeSpec& spec, std::span<const double> times) {
  double prev = spec.s;
  for (double t : times) {
    if (!(t > prev)) throw DomainError("bridge path: grid must be strictly increasing and start after s");
    prev = t;
  }
  if (!times.empty() && times.back() > spec.T) throw DomainError("bridge path: grid must end at or before T");
}

}  // namespace detail

/// One draw from the time-t bridge marginal by numeric inversion of its CDF
/// (tolerance 1e-10 on the CDF); works for any kernel.
inline double sample_bridge_point_numeric(const BridgeSpec& spec, double t, RandomStream& rng) {
  const BridgeMarginal marginal(spec, t);
  const double u = rng.uniform();
  if (spec.kernel.is_discrete()) {
    const auto n = static_cast<std::int64_t>(std::llround(spec.z - spec.x));
    double acc = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      acc += marginal.density(spec.x + static_cast<double>(j));
      if (u <= acc) return spec.x + static_cast<double>(j);
    }
    return spec.z;
  }
  std::vector<double> knots = marginal.breakpoints();
  knots.push_back(marginal.lower());
  knots.push_back(marginal.upper());
  auto dens = [&marginal](const numerics::QuadNode& n) { return marginal.density(n); };
  numerics::CdfTable<decltype(dens)> table(dens, std::move(knots), marginal.scale_hint());
  return table.quantile(u);
}

/// Sequential re-pinned bridge path on `times` (strictly increasing, in (s, T]).
/// Exact samplers: Gaussian conditional (Brownian), beta increments (gamma),
/// binomial jump placement (Poisson). A grid point at T returns z exactly.
inline SamplePath sample_bridge_path(const BridgeSpec& spec, std::span<const double> times, RandomStream& rng) {
  spec.validate();
  detail::check_grid(spec, times);
  SamplePath path;
  path.times.assign(times.begin(), times.end());
  path.values.reserve(times.size());
  BridgeSpec cur = spec;
  for (double t : times) {
    const double v = t == spec.T ? spec.z : detail::exact_bridge_step(cur, t, rng);
    path.values.push_back(v);
    cur.s = t;
    cur.x = v;
  }
  return path;
}

/// Same as sample_bridge_path but every point comes from the numeric
/// inverse-CDF fallback.
inline SamplePath sample_bridge_path_numeric(const BridgeSpec& spec, std::span<const double> times,
                                             RandomStream& rng) {
  spec.validate();
  detail::check_grid(spec, times);
  SamplePath path;
  path.times.assign(times.begin(), times.end());
  BridgeSpec cur = spec;
  for (double t : times) {
    const double v = t == spec.T ? spec.z : sample_bridge_point_numeric(cur, t, rng);
    path.values.push_back(v);
    cur.s = t;
    cur.x = v;
  }
  return path;
}

}  // namespace lrb
