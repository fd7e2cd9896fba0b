#pragma once

// Property and oracle checks for the whole library, runnable by name. Each
// check returns one or more rows {check, statistic, threshold, pass} with
// pass == (statistic <= threshold).
//
// Numbered criteria 1..12 have fixed instances; "normalization" adds the
// LRB transition-density normalization on top of criterion 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lrb/bridge.hpp"
#include "lrb/errors.hpp"
#include "lrb/io/output.hpp"
#include "lrb/kernels.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/pricing.hpp"
#include "lrb/random.hpp"
#include "lrb/random_bridge.hpp"
#include "lrb/sampler.hpp"
#include "lrb/stats.hpp"

namespace lrb::verify {

struct CheckResult {
  std::string check;
  double statistic;
  double threshold;
  bool pass;
};

struct Options {
  std::uint64_t seed = 20240917;
  unsigned workers = 1;
};

using Rows = std::vector<CheckResult>;

struct Criterion {
  int id;  // 0 for checks outside the numbered list
  std::string_view name;
  std::function<Rows(const Options&)> run;
};

namespace detail {

inline CheckResult row(std::string name, double stat, double threshold) {
  return {std::move(name), stat, threshold, stat <= threshold};
}

inline double z_score(const stats::Summary& s, double target) {
  if (s.std_error == 0.0) return s.mean == target ? 0.0 : kInf;
  return std::abs(s.mean - target) / s.std_error;
}

inline std::vector<double> column(const std::vector<SamplePath>& paths, std::size_t k) {
  std::vector<double> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.values[k]);
  return out;
}

inline LrbSpec binary_atoms(Kernel k) {
  return make_lrb(k, 1.0, TerminalLaw({{0.0, 0.5}, {1.0, 0.5}}, std::nullopt));
}

// --- 1 -----------------------------------------------------------------------

inline Rows bridge_normalization(const Options&) {
  Rows out;
  for (const auto& k : {Kernel::brownian(), Kernel::gamma(2.0)}) {
    double worst = 0.0;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (double z : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double pin = k.is_subordinator() ? z : z - 1.5;
        const BridgeMarginal m(BridgeSpec{k, 0.0, 0.0, 1.0, pin}, t);
        worst = std::max(worst, std::abs(m.probability(kNegInf, kInf) - 1.0));
      }
    }
    out.push_back(row("bridge_normalization." + std::string(k.name()), worst, 1e-8));
  }
  return out;
}

inline Rows transition_normalization(const Options&) {
  const numerics::QuadratureOptions loose{1e-9, 1e-8, 3, 8, 12};
  const std::vector<std::pair<std::string, LrbSpec>> specs{
      {"brownian_atoms", binary_atoms(Kernel::brownian())},
      {"brownian_mixed",
       make_lrb(Kernel::brownian(), 1.0, TerminalLaw({{-0.4, 0.3}}, DensityPart::normal(0.5, 0.3, 0.7)))},
      {"gamma_uniform", make_lrb(Kernel::gamma(3.0), 1.0, TerminalLaw::from_density(DensityPart::uniform(0.5, 3.0)))},
      {"poisson_atoms", make_lrb(Kernel::poisson(2.0), 1.0, TerminalLaw({{0.0, 0.2}, {1.0, 0.3}, {4.0, 0.5}}, std::nullopt))},
  };
  Rows out;
  for (const auto& [name, spec] : specs) {
    double worst = 0.0;
    for (const auto& [s, x, t] : {std::tuple{0.0, 0.0, 0.4}, std::tuple{0.2, 0.3, 0.6}, std::tuple{0.5, 1.0, 0.9}}) {
      double mass = 0.0;
      if (spec.kernel.is_discrete()) {
        const double xs = std::floor(x);
        for (int j = 0; j < 200; ++j) mass += lrb_transition_density(spec, s, xs, t, xs + j);
      } else {
        const double lo = spec.kernel.is_subordinator() ? x : kNegInf;
        std::vector<double> breaks{x, spec.terminal.ess_inf(), spec.terminal.ess_sup()};
        for (const auto& a : spec.terminal.atoms()) breaks.push_back(a.location);
        const double sd = std::sqrt(spec.kernel.increment_variance(t - s));
        for (double k : {-4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0}) {
          breaks.push_back(x + spec.kernel.increment_mean(t - s) + k * sd);
        }
        const double psi_s = psi_total(spec, s, x);
        const auto step = spec.kernel.at(t - s);
        mass = numerics::quad(
            [&](const numerics::QuadNode& n) {
              const double f = step.likelihood(n.offset_from(x));
              return f == 0.0 ? 0.0 : f * psi_total(spec, t, n.z) / psi_s;
            },
            lo, kInf, breaks, loose);
      }
      worst = std::max(worst, std::abs(mass - 1.0));
    }
    out.push_back(row("transition_normalization." + name, worst, 1e-8));
  }
  return out;
}

// --- 2 -----------------------------------------------------------------------

inline Rows chapman_kolmogorov(const Options&) {
  double cont = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double frac : {0.25, 0.5}) {
      const double s = frac * t;
      const auto bm = Kernel::brownian();
      for (double x : {-1.5, 0.0, 0.7, 2.0}) {
        const auto a = bm.at(t - s), b = bm.at(s);
        const double conv = numerics::quad([&](double y) { return a.likelihood(x - y) * b.likelihood(y); }, kNegInf,
                                           kInf, {0.0, x});
        cont = std::max(cont, std::abs(conv - bm.density(t, x)));
      }
      const auto g = Kernel::gamma(2.0);
      for (double x : {0.2, 1.0, 3.0}) {
        const auto a = g.at(t - s), b = g.at(s);
        const double conv = numerics::quad(
            [&](const numerics::QuadNode& n) {
              return a.likelihood(-n.offset_from(x)) * b.likelihood(n.offset_from(0.0));
            },
            0.0, x);
        cont = std::max(cont, std::abs(conv - g.density(t, x)));
      }
    }
  }
  double disc = 0.0;
  const auto p = Kernel::poisson(1.5);
  for (double t : {0.5, 1.0, 2.0}) {
    for (double s : {0.1, 0.3}) {
      for (int x = 0; x < 12; ++x) {
        double conv = 0.0;
        for (int y = 0; y <= x; ++y) conv += p.mass(t - s, x - y) * p.mass(s, y);
        disc = std::max(disc, std::abs(conv - p.mass(t, x)));
      }
    }
  }
  return {row("chapman_kolmogorov.continuous", cont, 1e-6), row("chapman_kolmogorov.poisson", disc, 1e-12)};
}

// --- 3 -----------------------------------------------------------------------

inline Rows psi_martingale(const Options& o) {
  const std::size_t n = 100000;
  const std::vector<std::pair<std::string, LrbSpec>> specs{
      {"brownian_atoms", make_lrb(Kernel::brownian(), 1.0, TerminalLaw({{-0.5, 0.4}, {1.0, 0.6}}, std::nullopt))},
      {"gamma_mixed",
       make_lrb(Kernel::gamma(2.0), 1.0, TerminalLaw({{0.8, 0.3}, {2.5, 0.2}}, DensityPart::gamma(3.0, 0.6, 0.5)))},
  };
  Rows out;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const auto& spec = specs[c].second;
    const auto psi = parallel_map<double>(n, o.workers, [&](std::size_t i) {
      RandomStream rng(o.seed + 31 * c, i);
      return psi_total(spec, 0.5, spec.kernel.sample_increment(0.5, rng));
    });
    out.push_back(row("psi_martingale." + specs[c].first, z_score(stats::summarize(psi), 1.0), 3.0));
  }
  return out;
}

// --- 4 -----------------------------------------------------------------------

inline Rows levy_recovery(const Options& o) {
  Rows out;
  const std::size_t n = 10000;
  const std::vector<double> grid{0.5};
  {
    const double theta = 0.6;
    const auto spec = make_lrb(Kernel::brownian(), 1.0, TerminalLaw::from_density(DensityPart::normal(theta, 1.0)));
    const auto s = stats::summarize(column(simulate_paths(spec, grid, n, o.seed + 1, o.workers), 0));
    out.push_back(row("levy_recovery.brownian_mean_z", z_score(s, theta / 2.0), 3.0));
    out.push_back(row("levy_recovery.brownian_variance_rel", std::abs(s.variance / 0.5 - 1.0), 0.05));
  }
  {
    const double m = 1.0, kappa = 2.0;
    const auto spec = make_lrb(Kernel::gamma(m), 1.0, TerminalLaw::from_density(DensityPart::gamma(m, kappa)));
    const auto s = stats::summarize(column(simulate_paths(spec, grid, n, o.seed + 2, o.workers), 0));
    out.push_back(row("levy_recovery.gamma_mean_z", z_score(s, kappa * m * 0.5), 3.0));
  }
  // psi closed forms against quadrature on 10 x 10 (t, y) grids
  {
    const double theta = 0.7;
    const auto spec = make_lrb(Kernel::brownian(), 1.0, TerminalLaw::from_density(DensityPart::normal(theta, 1.0)));
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double t = 0.05 + 0.1 * i;
      for (int j = 0; j < 10; ++j) {
        const double y = -2.0 + 0.45 * j;
        const double ref = std::exp(theta * y - theta * theta * t / 2.0);
        worst = std::max({worst, std::abs(psi_total_numeric(spec, t, y) / ref - 1.0),
                          std::abs(psi_total(spec, t, y) / ref - 1.0)});
      }
    }
    out.push_back(row("levy_recovery.psi_brownian_rel", worst, 1e-9));
  }
  {
    const double m = 1.5, kappa = 1.5;
    const auto spec = make_lrb(Kernel::gamma(m), 1.0, TerminalLaw::from_density(DensityPart::gamma(m, kappa)));
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double t = 0.05 + 0.1 * i;
      for (int j = 0; j < 10; ++j) {
        const double y = 0.05 + 0.4 * j;
        const double ref = std::pow(kappa, -m * t) * std::exp((1.0 - 1.0 / kappa) * y);
        worst = std::max({worst, std::abs(psi_total_numeric(spec, t, y) / ref - 1.0),
                          std::abs(psi_total(spec, t, y) / ref - 1.0)});
      }
    }
    out.push_back(row("levy_recovery.psi_gamma_rel", worst, 1e-9));
  }
  return out;
}

// --- 5 -----------------------------------------------------------------------

inline Rows stationary_increments(const Options& o) {
  const std::size_t n = 10000;
  const std::vector<std::pair<std::string, LrbSpec>> specs{
      {"brownian", make_lrb(Kernel::brownian(), 1.0, TerminalLaw({{-0.5, 0.4}, {1.0, 0.6}}, std::nullopt))},
      {"gamma", make_lrb(Kernel::gamma(2.0), 1.0, TerminalLaw({{0.7, 0.5}, {2.0, 0.5}}, std::nullopt))},
  };
  Rows out;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const auto& spec = specs[c].second;
    auto increments = [&](double u, std::uint64_t seed) {
      const std::vector<double> grid{u, u + 0.2};
      const auto paths = simulate_paths(spec, grid, n, seed, o.workers);
      std::vector<double> d;
      d.reserve(n);
      for (const auto& p : paths) d.push_back(p.values[1] - p.values[0]);
      return d;
    };
    const double ks = stats::ks_two_sample(increments(0.1, o.seed + 100 + c), increments(0.4, o.seed + 200 + c));
    out.push_back(row("stationary_increments." + specs[c].first, ks, stats::ks_critical_two_sample(n, n)));
  }
  return out;
}

// --- 6 -----------------------------------------------------------------------

inline Rows expectation(const Options& o) {
  const std::size_t n = 100000;
  const std::vector<double> grid{0.25, 0.5, 0.75};
  Rows out;
  for (const auto& k : {Kernel::brownian(), Kernel::poisson(2.0)}) {
    const auto spec = binary_atoms(k);
    const auto paths = simulate_paths(spec, grid, n, o.seed + 300 + (k.is_discrete() ? 1 : 0), o.workers);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, z_score(stats::summarize(column(paths, i)), grid[i] * spec.terminal.mean()));
    }
    out.push_back(row("expectation." + std::string(k.name()) + "_max_z", worst, 3.0));
  }
  return out;
}

// --- 7 -----------------------------------------------------------------------

// Bayes quotient joint(observed, query) / int joint(observed, .) over the
// queried coordinates, by nested quadrature or lattice sums.
inline double brute_force_conditional(const LrbSpec& spec, const std::vector<double>& alphas,
                                      const std::vector<std::size_t>& perm, const std::vector<double>& observed,
                                      const std::vector<double>& query) {
  const std::size_t n = alphas.size(), m = observed.size();
  auto joint = [&](const std::vector<double>& q) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < m; ++i) y[perm[i]] = observed[i];
    for (std::size_t i = 0; i < q.size(); ++i) y[perm[m + i]] = q[i];
    return increment_joint_density(spec, alphas, y).density;
  };
  double denom = 0.0;
  const std::size_t free = n - m;
  if (spec.kernel.is_discrete()) {
    const int cap = static_cast<int>(spec.terminal.ess_sup()) + 1;
    std::vector<double> q(free, 0.0);
    std::function<void(std::size_t)> rec = [&](std::size_t d) {
      if (d == free) {
        denom += joint(q);
        return;
      }
      for (int j = 0; j <= cap; ++j) {
        q[d] = j;
        rec(d + 1);
      }
    };
    rec(0);
  } else {
    const numerics::QuadratureOptions tight{1e-14, 1e-12, 3, 8, 12};
    const double lo = spec.kernel.is_subordinator() ? 0.0 : kNegInf;
    std::vector<double> q(free, 0.0);
    std::function<double(std::size_t)> rec = [&](std::size_t d) -> double {
      if (d == free) return joint(q);
      return numerics::quad(
          [&](double v) {
            q[d] = v;
            return rec(d + 1);
          },
          lo, kInf, {0.0, 0.5, 1.0, 2.0}, tight);
    };
    denom = rec(0);
  }
  return joint(query) / denom;
}

inline Rows liouville_reordering(const Options& o) {
  const std::vector<std::pair<std::string, LrbSpec>> specs{
      {"brownian", make_lrb(Kernel::brownian(), 1.0, TerminalLaw::from_density(DensityPart::normal(0.4, 0.8)))},
      {"gamma", make_lrb(Kernel::gamma(2.0), 1.0, TerminalLaw::from_density(DensityPart::gamma(3.0, 0.6)))},
      {"poisson", make_lrb(Kernel::poisson(2.0), 1.0, TerminalLaw({{1.0, 0.3}, {3.0, 0.4}, {5.0, 0.3}}, std::nullopt))},
  };
  const std::vector<double> alphas{0.2, 0.5, 0.3};
  RandomStream rng(o.seed + 700);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto& spec = specs[k % 3].second;
    std::vector<std::size_t> perm{0, 1, 2};
    for (std::size_t i = 2; i > 0; --i) std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform() * (i + 1))]);
    // two observed increments with 1-D brute force for most points, one with 2-D for every tenth
    const std::size_t m = k % 10 == 9 ? 1 : 2;
    auto draw = [&] {
      if (spec.kernel.is_discrete()) return std::floor(rng.uniform() * 2.0);
      if (spec.kernel.is_subordinator()) return 0.05 + rng.uniform() * 0.8;
      return -0.8 + 1.6 * rng.uniform();
    };
    std::vector<double> obs(m), query(3 - m);
    for (auto& v : obs) v = draw();
    for (auto& v : query) v = draw();
    if (spec.kernel.is_discrete()) {
      // land the total on an atom so the quotient is non-trivial
      double s = 0.0;
      for (double v : obs) s += v;
      for (std::size_t i = 0; i + 1 < query.size(); ++i) s += query[i];
      query.back() = std::max(0.0, 3.0 - s);
    }
    const double fast = reordered_increment_conditional(spec, alphas, perm, obs, query).density;
    const double slow = brute_force_conditional(spec, alphas, perm, obs, query);
    worst = std::max(worst, std::abs(fast - slow) / std::max(1.0, std::abs(slow)));
  }
  return {row("liouville_reordering.max_rel", worst, 1e-10)};
}

// --- 8 -----------------------------------------------------------------------

inline Rows pricing_martingale(const Options& o) {
  const std::size_t n = 100000;
  const std::vector<double> grid{0.25, 0.5, 0.75};
  const auto curve = RateCurve::flat(0.0);
  const std::vector<std::pair<std::string, LrbSpec>> specs{
      {"binary_bond", binary_bond_spec(BinaryBond{0.2, 1.0, 0.3}, 1.0)},
      {"brownian_normal", make_lrb(Kernel::brownian(), 1.0, TerminalLaw::from_density(DensityPart::normal(1.0, 0.5)))},
  };
  Rows out;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const auto& spec = specs[c].second;
    const auto paths = simulate_paths(spec, grid, n, o.seed + 800 + c, o.workers);
    const double x0 = price(spec, curve, 0.0, 0.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto xs = parallel_map<double>(n, o.workers, [&](std::size_t i) {
        return price(spec, curve, grid[k], paths[i].values[k]);
      });
      worst = std::max(worst, z_score(stats::summarize(xs), x0));
    }
    out.push_back(row("pricing_martingale." + specs[c].first + "_max_z", worst, 3.0));
  }
  return out;
}

// --- 9 -----------------------------------------------------------------------

inline Rows option_binary_bond(const Options& o) {
  const BinaryBond bond{0.0, 1.0, 0.5};
  const auto spec = binary_bond_spec(bond, 1.0);
  const auto curve = RateCurve::flat(0.0);
  const CallSpec cs{0.5, 0.5, 0.0, 0.0};
  const double closed = binary_bond_call(bond, curve, 1.0, cs);
  const double generic = call_price(spec, curve, cs, CallMethod::quadrature);
  const auto mc = call_price_mc(spec, curve, cs, 1000000, o.seed + 900, o.workers);
  return {row("option_binary_bond.reference_abs", std::abs(closed - 0.0957), 5e-5),
          row("option_binary_bond.mc_z", std::abs(mc.value - closed) / mc.std_error, 3.0),
          row("option_binary_bond.quadrature_abs", std::abs(generic - closed), 1e-7)};
}

// --- 10 ----------------------------------------------------------------------

inline Rows option_gamma(const Options& o) {
  const auto spec = make_lrb(Kernel::gamma(3.0), 1.0, TerminalLaw::from_density(DensityPart::uniform(0.5, 3.0)));
  const auto curve = RateCurve::flat(0.0);
  const CallSpec cs{1.6, 0.5, 0.2, 0.4};
  const double closed = call_price(spec, curve, cs, CallMethod::closed_form);
  const double generic = call_price(spec, curve, cs, CallMethod::quadrature);
  const auto mc = call_price_mc(spec, curve, cs, 100000, o.seed + 1000, o.workers);
  return {row("option_gamma.quadrature_abs", std::abs(generic - closed), 1e-6),
          row("option_gamma.mc_z", std::abs(mc.value - closed) / mc.std_error, 3.0)};
}

// --- 11 ----------------------------------------------------------------------

// Realised quadratic variation of X_tT against the integrated squared
// diffusion coefficient, path by path, on [0, kQvHorizon].
inline constexpr double kQvHorizon = 0.9;

inline Rows sde_quadratic_variation(const Options& o) {
  const BinaryBond bond{0.2, 1.0, 0.4};
  const auto spec = binary_bond_spec(bond, 1.0);
  const auto curve = RateCurve::flat(0.03);
  const double dt = 1.0 / 500.0;
  const int steps = static_cast<int>(std::lround(kQvHorizon / dt));
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(i * dt);
  const std::size_t n = 1000;
  const auto paths = simulate_paths(spec, grid, n, o.seed + 1100, o.workers);
  std::vector<double> predicted(n), realised(n);
  for (std::size_t p = 0; p < n; ++p) {
    double qv = 0.0, iv = 0.0;
    double x_prev = price(spec, curve, 0.0, 0.0);
    for (int i = 0; i < steps; ++i) {
      const double t = grid[i], xi = paths[p].values[i];
      const double sigma = sde_coefficients(spec, curve, t, xi).diffusion;
      iv += sigma * sigma * dt;
      const double x_next = price(spec, curve, grid[i + 1], paths[p].values[i + 1]);
      qv += (x_next - x_prev) * (x_next - x_prev);
      x_prev = x_next;
    }
    predicted[p] = iv;
    realised[p] = qv;
  }
  const double slope = stats::slope_through_origin(predicted, realised);
  return {row("sde_quadratic_variation.slope_rel", std::abs(slope - 1.0), 0.05)};
}

// --- 12 ----------------------------------------------------------------------

inline Rows determinism(const Options& o) {
  const auto spec =
      make_lrb(Kernel::gamma(2.0), 1.0, TerminalLaw({{0.8, 0.3}, {2.5, 0.2}}, DensityPart::gamma(3.0, 0.6, 0.5)));
  const std::vector<double> grid{0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  auto csv = [&](unsigned workers) {
    std::ostringstream os;
    const auto paths = simulate_paths(spec, grid, 500, o.seed + 1200, workers);
    io::write_paths_csv(os, paths);
    return os.str();
  };
  const std::string a = csv(1), b = csv(8);
  return {row("determinism.bytes_differing", a == b ? 0.0 : 1.0, 0.0)};
}

}  // namespace detail

/// All checks, numbered criteria first.
inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "bridge_normalization", detail::bridge_normalization},
      {2, "chapman_kolmogorov", detail::chapman_kolmogorov},
      {3, "psi_martingale", detail::psi_martingale},
      {4, "levy_recovery", detail::levy_recovery},
      {5, "stationary_increments", detail::stationary_increments},
      {6, "expectation", detail::expectation},
      {7, "liouville_reordering", detail::liouville_reordering},
      {8, "pricing_martingale", detail::pricing_martingale},
      {9, "option_binary_bond", detail::option_binary_bond},
      {10, "option_gamma", detail::option_gamma},
      {11, "sde_quadratic_variation", detail::sde_quadratic_variation},
      {12, "determinism", detail::determinism},
      {0, "transition_normalization", detail::transition_normalization},
  };
  return all;
}

/// Expands group names ("all", "normalization") and checks that every name exists.
inline std::vector<const Criterion*> resolve(const std::vector<std::string>& names) {
  std::vector<const Criterion*> out;
  auto add = [&](std::string_view name) {
    for (const auto& c : criteria()) {
      if (c.name == name) {
        if (std::find(out.begin(), out.end(), &c) == out.end()) out.push_back(&c);
        return;
      }
    }
    throw DomainError("unknown check '" + std::string(name) + "'");
  };
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& c : criteria()) add(c.name);
    } else if (n == "normalization") {
      add("bridge_normalization");
      add("transition_normalization");
    } else {
      add(n);
    }
  }
  return out;
}

inline Rows run(const std::vector<std::string>& names, const Options& o) {
  Rows out;
  for (const auto* c : resolve(names)) {
    auto rows = c->run(o);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

inline std::string report_json(const Rows& rows) {
  std::vector<std::string> items;
  for (const auto& r : rows) {
    items.push_back(io::JsonRecord()
                        .str("check", r.check)
                        .num("statistic", r.statistic)
                        .num("threshold", r.threshold)
                        .boolean("pass", r.pass)
                        .text());
  }
  return io::json_array(items);
}

}  // namespace lrb::verify
