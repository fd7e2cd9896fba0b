#pragma once

// Information-based pricing of a single cash flow X_T revealed at T through an
// LRB information process xi_tT:
//   X_tT  = P_tT int z nu_t(dz)                      (= Lambda(t, xi_tT))
//   C_st  = P_st int (P_tT z - K) mu_st(B_t; z) nu_s(dz),  B_t = {Lambda(t, .) > K}
// where mu_st(.; z) is the time-t marginal of the Levy bridge from (s, xi_s)
// to (T, z).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

#include "lrb/bridge.hpp"
#include "lrb/errors.hpp"
#include "lrb/numerics/roots.hpp"
#include "lrb/numerics/special.hpp"
#include "lrb/parallel.hpp"
#include "lrb/random_bridge.hpp"
#include "lrb/stats.hpp"

namespace lrb {

/// Piecewise-constant deterministic short rate. Segment i holds rate r_i on
/// [start_i, start_{i+1}); the last segment runs to infinity.
class RateCurve {
 public:
  struct Segment {
    double start;
    double rate;
    friend bool operator==(const Segment&, const Segment&) = default;
  };

  RateCurve() : segments_{{0.0, 0.0}} {}

  explicit RateCurve(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw InvalidSpecError("rate curve: need at least one segment");
    if (segments_.front().start != 0.0) throw InvalidSpecError("rate curve: first segment must start at 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (!(segments_[i].rate >= 0.0) || !std::isfinite(segments_[i].rate)) {
        throw InvalidSpecError("rate curve: rates must be finite and >= 0");
      }
      if (i > 0 && !(segments_[i].start > segments_[i - 1].start)) {
        throw InvalidSpecError("rate curve: segment starts must be increasing");
      }
    }
  }

  static RateCurve flat(double r) { return RateCurve({{0.0, r}}); }

  const std::vector<Segment>& segments() const noexcept { return segments_; }

  double rate(double t) const {
    double r = segments_.front().rate;
    for (const auto& s : segments_) {
      if (s.start <= t) r = s.rate;
    }
    return r;
  }

  /// int_0^t r_u du.
  double integral(double t) const {
    if (!(t >= 0.0)) throw DomainError("rate curve: negative time");
    double acc = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const double a = segments_[i].start;
      if (t <= a) break;
      const double b = i + 1 < segments_.size() ? std::min(t, segments_[i + 1].start) : t;
      acc += segments_[i].rate * (b - a);
    }
    return acc;
  }

  /// P_st = exp(-int_s^t r_u du).
  double discount(double s, double t) const {
    if (!(s <= t)) throw DomainError("discount: need s <= t");
    if (s == t) return 1.0;
    return std::exp(-(integral(t) - integral(s)));
  }

  friend bool operator==(const RateCurve&, const RateCurve&) = default;

 private:
  std::vector<Segment> segments_;
};

inline double discount(const RateCurve& curve, double s, double t) { return curve.discount(s, t); }

struct PriceDetails {
  double price;
  double posterior_mean;
  double psi;
};

/// X_tT together with the posterior mean and psi_t(R; xi).
inline PriceDetails price_details(const LrbSpec& spec, const RateCurve& curve, double t, double xi) {
  if (!(t >= 0.0) || !(t < spec.horizon)) throw DomainError("price: need 0 <= t < T");
  const double mean = posterior_mean(spec, t, xi);
  if (!std::isfinite(mean)) throw NumericError("price: posterior mean is not finite");
  const double psi = psi_total(spec, t, xi);
  return {curve.discount(t, spec.horizon) * mean, mean, psi};
}

/// X_tT = Lambda(t, xi).
inline double price(const LrbSpec& spec, const RateCurve& curve, double t, double xi) {
  if (!(t >= 0.0) || !(t < spec.horizon)) throw DomainError("price: need 0 <= t < T");
  return curve.discount(t, spec.horizon) * posterior_mean(spec, t, xi);
}

/// B_t = {x : Lambda(t, x) > K} (open). `all` and `none` are the degenerate
/// cases; `above` is (xi_star, inf); `intervals` is a finite union of open
/// intervals found in generic mode.
struct ExerciseSet {
  enum class Kind { all, none, above, intervals };
  Kind kind = Kind::none;
  double xi_star = 0.0;
  std::vector<std::pair<double, double>> intervals;

  bool contains(double x) const {
    switch (kind) {
      case Kind::all: return true;
      case Kind::none: return false;
      case Kind::above: return x > xi_star;
      case Kind::intervals:
        for (const auto& [a, b] : intervals) {
          if (x > a && x < b) return true;
        }
        return false;
    }
    return false;
  }
};

enum class ExerciseMode { monotone, generic };

namespace detail {

// Lower end of the range of the information process.
inline double reachable_lower(const LrbSpec& spec) { return spec.kernel.is_subordinator() ? 0.0 : kNegInf; }

inline double information_center(const LrbSpec& spec, double t) {
  double m = 0.0;
  try {
    m = spec.terminal.mean();
  } catch (const NumericError&) {
    m = 0.0;
  }
  return t / spec.horizon * m;
}

inline double information_scale(const LrbSpec& spec, double t) {
  const double v = spec.kernel.increment_variance(t);
  return std::max(std::sqrt(v), spec.kernel.is_subordinator() ? spec.kernel.increment_mean(t) : 0.0);
}

}  // namespace detail

/// Solves Lambda(t, x) = K for the exercise boundary. Monotone mode verifies
/// monotonicity on the bracket and refuses the gamma regime m(T-t) <= 1;
/// generic mode scans for every crossing.
inline ExerciseSet critical_information(const LrbSpec& spec, const RateCurve& curve, double t, double K,
                                        ExerciseMode mode = ExerciseMode::monotone) {
  const double T = spec.horizon;
  if (!(t > 0.0) || !(t < T)) throw DomainError("critical_information: need 0 < t < T");
  if (!(K >= 0.0) || !std::isfinite(K)) throw DomainError("critical_information: strike must be finite and >= 0");
  const double P = curve.discount(t, T);
  ExerciseSet out;
  if (K <= P * spec.terminal.ess_inf()) {
    out.kind = ExerciseSet::Kind::all;
    return out;
  }
  if (K >= P * spec.terminal.ess_sup()) {
    out.kind = ExerciseSet::Kind::none;
    return out;
  }
  if (mode == ExerciseMode::monotone && spec.kernel.family() == KernelFamily::gamma &&
      spec.kernel.parameter() * (T - t) <= 1.0) {
    throw NonMonotoneError("critical_information: monotonicity of Lambda is unverified for gamma with m(T-t) <= 1");
  }
  auto excess = [&](double x) { return price(spec, curve, t, x) - K; };
  const double lo_reach = detail::reachable_lower(spec);
  const double scale = detail::information_scale(spec, t);
  const double center = std::max(detail::information_center(spec, t), lo_reach);

  auto safe_excess = [&](double x, double fallback) {
    try {
      return excess(x);
    } catch (const UnreachableStateError&) {
      return fallback;
    }
  };
  const double tol = 1e-10 * std::max(1.0, K);

  if (mode == ExerciseMode::monotone) {
    // Expand a bracket [lo, hi] around the centre until the excess changes sign.
    double lo = center, hi = center;
    double step = scale;
    double flo = safe_excess(lo, -K), fhi = flo;
    for (int i = 0; i < 80 && flo > 0.0; ++i) {
      lo = std::isfinite(lo_reach) ? lo_reach + (lo - lo_reach) * 0.5 : lo - step;
      step *= 2.0;
      flo = safe_excess(lo, -K);
      if (std::isfinite(lo_reach) && lo - lo_reach < 1e-300) break;
    }
    step = scale;
    for (int i = 0; i < 80 && fhi <= 0.0; ++i) {
      hi += step;
      step *= 2.0;
      fhi = safe_excess(hi, 1.0);
    }
    if (flo > 0.0) {
      out.kind = ExerciseSet::Kind::all;
      return out;
    }
    if (fhi <= 0.0) {
      out.kind = ExerciseSet::Kind::none;
      return out;
    }
    numerics::RootOptions ro;
    ro.tol = tol;
    ro.monotone_samples = 16;
    out.kind = ExerciseSet::Kind::above;
    out.xi_star = numerics::find_root_monotone(excess, lo, hi, ro);
    return out;
  }

  // Generic mode: sign scan over a fixed window (from the reachable lower end
  // for subordinators), refined towards the window ends, then root polishing
  // on every sign change. The excess outside the window is taken to keep the
  // sign it has at the window ends.
  const double lo = std::isfinite(lo_reach) ? lo_reach : center - 16.0 * scale;
  double hi = center + 16.0 * scale;
  for (int i = 0; i < 60 && safe_excess(hi, 1.0) <= 0.0; ++i) {
    hi += 16.0 * scale;
  }
  const int n = 400;
  std::vector<double> xs(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    xs[i] = lo + (hi - lo) * (0.5 - 0.5 * std::cos(std::numbers::pi * u));
    fs[i] = safe_excess(xs[i], i == 0 ? -K : 1.0);
  }
  numerics::RootOptions ro;
  ro.tol = tol;
  ro.monotone_samples = 0;
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  double open = fs[0] > 0.0 ? (std::isfinite(lo_reach) ? lo_reach : kNegInf) : kNaN;
  for (int i = 0; i < n; ++i) {
    if ((fs[i] > 0.0) == (fs[i + 1] > 0.0)) continue;
    const double r = numerics::find_root_monotone(excess, xs[i], xs[i + 1], ro);
    if (fs[i + 1] > 0.0) {
      open = r;
    } else {
      out.intervals.emplace_back(open, r);
      open = kNaN;
    }
  }
  if (!std::isnan(open)) out.intervals.emplace_back(open, kInf);
  if (out.intervals.empty()) {
    out.kind = ExerciseSet::Kind::none;
  } else if (out.intervals.size() == 1 && out.intervals.front().second == kInf) {
    const double a = out.intervals.front().first;
    if (a == lo_reach || std::isinf(a)) {
      out.kind = ExerciseSet::Kind::all;
    } else {
      out.kind = ExerciseSet::Kind::above;
      out.xi_star = a;
    }
    out.intervals.clear();
  } else {
    out.kind = ExerciseSet::Kind::intervals;
  }
  return out;
}

struct CallSpec {
  double strike;
  double maturity;   // t
  double valuation;  // s
  double xi;         // information at s
};

enum class CallMethod { closed_form, quadrature };

inline CallMethod parse_call_method(std::string_view s) {
  if (s == "closed_form") return CallMethod::closed_form;
  if (s == "quadrature") return CallMethod::quadrature;
  throw DomainError("unknown call pricing method '" + std::string(s) + "'");
}

/// mu_st(B; z): probability that the bridge from (s, xi_s) to (T, z) is in B at t.
inline double bridge_set_probability(const LrbSpec& spec, const CallSpec& cs, const ExerciseSet& B, double z,
                                     CallMethod method) {
  if (B.kind == ExerciseSet::Kind::all) return 1.0;
  if (B.kind == ExerciseSet::Kind::none) return 0.0;
  const BridgeSpec bridge{spec.kernel, cs.valuation, cs.xi, spec.horizon, z};
  const double t = cs.maturity;
  std::vector<std::pair<double, double>> pieces =
      B.kind == ExerciseSet::Kind::above ? std::vector<std::pair<double, double>>{{B.xi_star, kInf}} : B.intervals;
  double mu = 0.0;
  if (method == CallMethod::closed_form) {
    const double s = cs.valuation, T = spec.horizon;
    if (B.kind == ExerciseSet::Kind::above && spec.kernel.family() == KernelFamily::brownian) {
      const double M = ((T - t) * cs.xi + (t - s) * z) / (T - s);
      const double V = (t - s) * (T - t) / (T - s);
      return numerics::normal_cdf((M - B.xi_star) / std::sqrt(V));
    }
    if (B.kind == ExerciseSet::Kind::above && spec.kernel.family() == KernelFamily::gamma) {
      if (z <= B.xi_star) return 0.0;
      if (B.xi_star <= cs.xi) return 1.0;
      const double m = spec.kernel.parameter();
      return numerics::incomplete_beta((z - B.xi_star) / (z - cs.xi), m * (T - t), m * (t - s));
    }
    for (const auto& [a, b] : pieces) {
      const double fb = std::isinf(b) ? 1.0 : bridge_cdf_closed_form(bridge, t, b);
      const double fa = std::isinf(a) ? 0.0 : bridge_cdf_closed_form(bridge, t, a);
      mu += fb - fa;
    }
    return std::clamp(mu, 0.0, 1.0);
  }
  if (spec.kernel.is_discrete()) {
    const BridgeMarginal marginal(bridge, t);
    for (double y = cs.xi; y <= z; y += 1.0) {
      if (B.contains(y)) mu += marginal.density(y);
    }
    return std::clamp(mu, 0.0, 1.0);
  }
  const BridgeMarginal marginal(bridge, t);
  for (const auto& [a, b] : pieces) mu += marginal.probability(a, b);
  return std::clamp(mu, 0.0, 1.0);
}

/// C_st for a t-maturity call with strike K on X_tT, valued at s given xi_s.
inline double call_price(const LrbSpec& spec, const RateCurve& curve, const CallSpec& cs,
                         CallMethod method = CallMethod::closed_form, ExerciseMode mode = ExerciseMode::monotone) {
  const double T = spec.horizon;
  if (!(cs.valuation >= 0.0) || !(cs.valuation < cs.maturity) || !(cs.maturity < T)) {
    throw DomainError("call_price: need 0 <= s < t < T");
  }
  if (!(cs.strike >= 0.0)) throw DomainError("call_price: strike must be >= 0");
  const double Pst = curve.discount(cs.valuation, cs.maturity);
  const double PtT = curve.discount(cs.maturity, T);
  const ExerciseSet B = critical_information(spec, curve, cs.maturity, cs.strike, mode);
  const TerminalLaw post = terminal_posterior(spec, cs.valuation, cs.xi);
  if (B.kind == ExerciseSet::Kind::all) return Pst * (PtT * post.mean() - cs.strike);
  if (B.kind == ExerciseSet::Kind::none) return 0.0;
  std::vector<double> breaks{cs.xi};
  if (B.kind == ExerciseSet::Kind::above) breaks.push_back(B.xi_star);
  for (const auto& [a, b] : B.intervals) {
    breaks.push_back(a);
    breaks.push_back(b);
  }
  const numerics::QuadratureOptions outer{1e-10, 1e-9, 3, 8, 12};
  const double value = post.integrate(
      [&](const numerics::QuadNode& n) {
        const double mu = bridge_set_probability(spec, cs, B, n.z, method);
        return mu == 0.0 ? 0.0 : (PtT * n.z - cs.strike) * mu;
      },
      breaks, kNegInf, kInf, outer);
  return Pst * value;
}

/// Upper bound P_st int (P_tT z - K)^+ nu_s(dz).
inline double call_upper_bound(const LrbSpec& spec, const RateCurve& curve, const CallSpec& cs) {
  const double PtT = curve.discount(cs.maturity, spec.horizon);
  const TerminalLaw post = terminal_posterior(spec, cs.valuation, cs.xi);
  std::vector<double> breaks{cs.strike / PtT};
  return curve.discount(cs.valuation, cs.maturity) *
         post.integrate([&](const numerics::QuadNode& n) { return std::max(PtT * n.z - cs.strike, 0.0); }, breaks);
}

struct McEstimate {
  double value;
  double std_error;
  std::size_t paths;
};

/// Monte Carlo call price: Z ~ nu_s, xi_t from the bridge (s, xi_s) -> (T, Z),
/// payoff P_st (Lambda(t, xi_t) - K)^+. Path i uses RandomStream(seed, i).
inline McEstimate call_price_mc(const LrbSpec& spec, const RateCurve& curve, const CallSpec& cs, std::size_t paths,
                                std::uint64_t seed, unsigned workers = 1) {
  const double T = spec.horizon;
  if (!(cs.valuation >= 0.0) || !(cs.valuation < cs.maturity) || !(cs.maturity < T)) {
    throw DomainError("call_price_mc: need 0 <= s < t < T");
  }
  const LawSampler terminal(terminal_posterior(spec, cs.valuation, cs.xi));
  const double Pst = curve.discount(cs.valuation, cs.maturity);
  const std::vector<double> grid{cs.maturity};
  const auto payoffs = parallel_map<double>(paths, workers, [&](std::size_t i) {
    RandomStream rng(seed, i);
    const double z = terminal.draw(rng);
    const BridgeSpec bridge{spec.kernel, cs.valuation, cs.xi, T, z};
    const double xt = sample_bridge_path(bridge, grid, rng).values[0];
    return Pst * std::max(price(spec, curve, cs.maturity, xt) - cs.strike, 0.0);
  });
  const auto s = stats::summarize(payoffs);
  return {s.mean, s.std_error, paths};
}

/// Two-point cash flow: k0 (recovery) with probability p, k1 (principal) with 1 - p.
struct BinaryBond {
  double k0;
  double k1;
  double p;

  void validate() const {
    if (!(k0 < k1) || !std::isfinite(k0) || !std::isfinite(k1)) throw InvalidSpecError("binary bond: need k0 < k1");
    if (!(p > 0.0 && p < 1.0)) throw InvalidSpecError("binary bond: p must lie in (0, 1)");
  }
};

/// The Brownian-information LRB of a binary bond.
inline LrbSpec binary_bond_spec(const BinaryBond& bond, double T) {
  bond.validate();
  return make_lrb(Kernel::brownian(), T, TerminalLaw({{bond.k0, bond.p}, {bond.k1, 1.0 - bond.p}}, std::nullopt));
}

/// (rho0, rho1) = (Q[X_T = k0 | xi_t], Q[X_T = k1 | xi_t]) under Brownian
/// information, from the exponent (k1-k0)/(2(T-t)) ((t/T)(k0+k1) - 2 xi).
inline std::pair<double, double> binary_bond_posterior(const BinaryBond& bond, double T, double t, double xi) {
  bond.validate();
  if (!(t >= 0.0) || !(t < T)) throw DomainError("binary_bond_posterior: need 0 <= t < T");
  if (t == 0.0) return {bond.p, 1.0 - bond.p};
  const double e = 0.5 * (bond.k1 - bond.k0) / (T - t) * (t / T * (bond.k0 + bond.k1) - 2.0 * xi);
  // rho0 = p e^E / (p e^E + 1 - p), arranged to avoid overflow.
  const double log_odds = std::log(bond.p / (1.0 - bond.p)) + e;
  const double rho0 = log_odds > 0.0 ? 1.0 / (1.0 + std::exp(-log_odds)) : std::exp(log_odds) / (1.0 + std::exp(log_odds));
  const double rho1 = log_odds > 0.0 ? std::exp(-log_odds) / (1.0 + std::exp(-log_odds)) : 1.0 / (1.0 + std::exp(log_odds));
  return {rho0, rho1};
}

/// xi*_t = (t/2T)(k0+k1) - ((T-t)/(k1-k0)) log[(p/(1-p)) (K - P k0)/(P k1 - K)],
/// valid for P k0 < K < P k1.
inline double binary_bond_critical_information(const BinaryBond& bond, const RateCurve& curve, double T, double t,
                                               double K) {
  bond.validate();
  const double P = curve.discount(t, T);
  if (!(K > P * bond.k0 && K < P * bond.k1)) throw DomainError("binary bond: strike outside (P k0, P k1)");
  return t / (2.0 * T) * (bond.k0 + bond.k1) +
         (T - t) / (bond.k1 - bond.k0) * std::log(bond.p / (1.0 - bond.p) * (K - P * bond.k0) / (P * bond.k1 - K));
}

/// C_st = P_st sum_i (P_tT k_i - K) Phi[(M(k_i) - xi*) / sqrt(V)] rho_i(s, xi_s).
inline double binary_bond_call(const BinaryBond& bond, const RateCurve& curve, double T, const CallSpec& cs) {
  const double s = cs.valuation, t = cs.maturity;
  if (!(s >= 0.0) || !(s < t) || !(t < T)) throw DomainError("binary_bond_call: need 0 <= s < t < T");
  const double P = curve.discount(t, T);
  if (cs.strike <= P * bond.k0) {
    const auto [r0, r1] = binary_bond_posterior(bond, T, s, cs.xi);
    return curve.discount(s, t) * (P * (r0 * bond.k0 + r1 * bond.k1) - cs.strike);
  }
  if (cs.strike >= P * bond.k1) return 0.0;
  const double xs = binary_bond_critical_information(bond, curve, T, t, cs.strike);
  const auto [r0, r1] = binary_bond_posterior(bond, T, s, cs.xi);
  const double V = (t - s) * (T - t) / (T - s);
  auto term = [&](double k, double rho) {
    const double M = ((T - t) * cs.xi + (t - s) * k) / (T - s);
    return (P * k - cs.strike) * numerics::normal_cdf((M - xs) / std::sqrt(V)) * rho;
  };
  return curve.discount(s, t) * (term(bond.k0, r0) + term(bond.k1, r1));
}

struct SdeCoefficients {
  double drift;      // r_t X_tT
  double diffusion;  // P_tT Var[X_T | xi_t] / (T - t)
  double price;
  double variance;
};

/// Coefficients of dX_tT = r_t X_tT dt + sigma_t dW_t under Brownian information.
inline SdeCoefficients sde_coefficients(const LrbSpec& spec, const RateCurve& curve, double t, double xi) {
  if (spec.kernel.family() != KernelFamily::brownian) {
    throw UnsupportedKernelError("sde_coefficients: the price SDE is available for Brownian information only");
  }
  const double T = spec.horizon;
  if (!(t >= 0.0) || !(t < T)) throw DomainError("sde_coefficients: need 0 <= t < T");
  const TerminalLaw post = terminal_posterior(spec, t, xi);
  const double m1 = post.mean();
  const double m2 = post.moment(2);
  const double var = std::max(m2 - m1 * m1, 0.0);
  const double P = curve.discount(t, T);
  const double X = P * m1;
  return {curve.rate(t) * X, P * var / (T - t), X, var};
}

/// Binary-bond diffusion -P_tT (k0 - X/P_tT)(k1 - X/P_tT) / (T - t).
inline double binary_bond_diffusion(const BinaryBond& bond, const RateCurve& curve, double T, double t, double xi) {
  const auto [r0, r1] = binary_bond_posterior(bond, T, t, xi);
  const double P = curve.discount(t, T);
  const double X = P * (r0 * bond.k0 + r1 * bond.k1);
  return -P * (bond.k0 - X / P) * (bond.k1 - X / P) / (T - t);
}

}  // namespace lrb
