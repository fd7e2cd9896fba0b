#pragma once

// LRB path generation by two independent routes:
//   terminal-first  Z ~ nu, then a Levy bridge from (0, 0) to (T, Z)
//   Markov          sequential draws from the transition law, the time-T
//                   value from the conditional terminal law nu_s
// plus plain Levy paths and a reproducible multi-path driver.

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lrb/bridge.hpp"
#include "lrb/errors.hpp"
#include "lrb/numerics/inversion.hpp"
#include "lrb/parallel.hpp"
#include "lrb/random.hpp"
#include "lrb/random_bridge.hpp"
#include "lrb/terminal_law.hpp"

namespace lrb {

namespace detail {

inline void check_lrb_grid(std::span<const double> grid, double horizon) {
  double prev = -1.0;
  for (double t : grid) {
    if (!(t > prev)) throw DomainError("sampler: grid must be strictly increasing");
    prev = t;
  }
  if (!grid.empty() && (grid.front() < 0.0 || grid.back() > horizon)) {
    throw DomainError("sampler: grid must lie in [0, T]");
  }
}

}  // namespace detail

/// Levy path (no conditioning) on a grid in [0, inf).
inline SamplePath sample_levy_path(const Kernel& kernel, std::span<const double> grid, RandomStream& rng) {
  detail::check_lrb_grid(grid, kInf);
  SamplePath p;
  double t = 0.0, x = 0.0;
  for (double g : grid) {
    if (g > t) x += kernel.sample_increment(g - t, rng);
    t = g;
    p.times.push_back(g);
    p.values.push_back(x);
  }
  return p;
}

/// Terminal-first sampler. Holds the terminal-law sampler so repeated draws
/// reuse its tables.
class TerminalFirstSampler {
 public:
  explicit TerminalFirstSampler(LrbSpec spec) : spec_(std::move(spec)), terminal_(spec_.terminal) {
    spec_.validate();
  }

  const LrbSpec& spec() const noexcept { return spec_; }

  SamplePath operator()(std::span<const double> grid, RandomStream& rng) const {
    detail::check_lrb_grid(grid, spec_.horizon);
    const double z = terminal_.draw(rng);
    SamplePath p;
    std::size_t first = 0;
    if (!grid.empty() && grid.front() == 0.0) first = 1;
    const BridgeSpec bridge{spec_.kernel, 0.0, 0.0, spec_.horizon, z};
    const auto tail = sample_bridge_path(bridge, grid.subspan(first), rng);
    if (first == 1) {
      p.times.push_back(0.0);
      p.values.push_back(0.0);
    }
    p.times.insert(p.times.end(), tail.times.begin(), tail.times.end());
    p.values.insert(p.values.end(), tail.values.begin(), tail.values.end());
    return p;
  }

 private:
  LrbSpec spec_;
  LawSampler terminal_;
};

inline SamplePath sample_lrb_terminal_first(const LrbSpec& spec, std::span<const double> grid, RandomStream& rng) {
  return TerminalFirstSampler(spec)(grid, rng);
}

/// Markov sampler: numeric inverse-CDF on the transition density (lattice scan
/// for discrete kernels); a grid point at T is drawn from nu_s.
class MarkovSampler {
 public:
  explicit MarkovSampler(LrbSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

  const LrbSpec& spec() const noexcept { return spec_; }

  /// One draw of L_t given L_s = x, s < t <= T.
  double step(double s, double x, double t, RandomStream& rng) const {
    if (t >= spec_.horizon) {
      const LawSampler post(terminal_posterior(spec_, s, x));
      return post.draw(rng);
    }
    const double psi_s = detail::reachable_psi(spec_, s, x);
    const KernelSlice inc = spec_.kernel.at(t - s);
    const double u = rng.uniform();
    if (spec_.kernel.is_discrete()) {
      double acc = 0.0;
      double cap = x;
      for (const auto& a : spec_.terminal.atoms()) cap = std::max(cap, a.location);
      for (double y = x; y <= cap; y += 1.0) {
        const double f = inc.likelihood(y - x);
        if (f > 0.0) acc += f * psi_total(spec_, t, y) / psi_s;
        if (u <= acc) return y;
      }
      return cap;
    }
    auto dens = [&](const numerics::QuadNode& n) {
      const double f = inc.likelihood(n.offset_from(x));
      if (f == 0.0) return 0.0;
      return f * psi_total(spec_, t, n.z) / psi_s;
    };
    const double mean = x + spec_.kernel.increment_mean(t - s);
    const double sd = std::sqrt(spec_.kernel.increment_variance(t - s));
    std::vector<double> knots{x};
    for (int k = -8; k <= 8; ++k) knots.push_back(mean + 0.5 * k * sd);
    for (const auto& a : spec_.terminal.atoms()) knots.push_back(a.location);
    if (const auto& d = spec_.terminal.density()) {
      for (double b : {d->hints().lower, d->hints().upper}) {
        if (std::isfinite(b)) knots.push_back(b);
      }
    }
    const double lower = spec_.kernel.is_subordinator() ? x : kNegInf;
    std::erase_if(knots, [&](double k) { return !(k > lower); });
    knots.push_back(lower);
    knots.push_back(kInf);
    const numerics::QuadratureOptions loose{1e-10, 1e-7, 3, 8, 14};
    numerics::CdfTable<decltype(dens)> table(dens, std::move(knots), sd, 1e-10, loose);
    return table.quantile(u);
  }

  SamplePath operator()(std::span<const double> grid, RandomStream& rng) const {
    detail::check_lrb_grid(grid, spec_.horizon);
    SamplePath p;
    double s = 0.0, x = 0.0;
    for (double t : grid) {
      if (t > 0.0) {
        x = step(s, x, t, rng);
        s = t;
      }
      p.times.push_back(t);
      p.values.push_back(x);
    }
    return p;
  }

 private:
  LrbSpec spec_;
};

inline SamplePath sample_lrb_markov(const LrbSpec& spec, std::span<const double> grid, RandomStream& rng) {
  return MarkovSampler(spec)(grid, rng);
}

enum class SamplerMethod { terminal_first, markov };

inline SamplerMethod parse_sampler_method(std::string_view s) {
  if (s == "terminal_first") return SamplerMethod::terminal_first;
  if (s == "markov") return SamplerMethod::markov;
  throw DomainError("unknown sampler method '" + std::string(s) + "'");
}

inline std::string_view to_string(SamplerMethod m) {
  return m == SamplerMethod::markov ? "markov" : "terminal_first";
}

/// `paths` LRB paths; path i always uses RandomStream(seed, i), so the result
/// is identical for every worker count.
inline std::vector<SamplePath> simulate_paths(const LrbSpec& spec, std::span<const double> grid, std::size_t paths,
                                              std::uint64_t seed, unsigned workers,
                                              SamplerMethod method = SamplerMethod::terminal_first) {
  detail::check_lrb_grid(grid, spec.horizon);
  if (method == SamplerMethod::markov) {
    const MarkovSampler sampler(spec);
    return parallel_map<SamplePath>(paths, workers, [&](std::size_t i) {
      RandomStream rng(seed, i);
      return sampler(grid, rng);
    });
  }
  const TerminalFirstSampler sampler(spec);
  return parallel_map<SamplePath>(paths, workers, [&](std::size_t i) {
    RandomStream rng(seed, i);
    return sampler(grid, rng);
  });
}

}  // namespace lrb
