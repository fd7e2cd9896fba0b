#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lrb {

/// splitmix64 finalizer; used to decorrelate (seed, substream) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// A reproducible random stream. (seed, substream) fully determines every draw,
/// so path i of a run is generated from substream i regardless of which worker
/// produces it. Streams are not thread-safe; never share one between threads.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t substream = 0)
      : seed_(seed), substream_(substream), engine_(splitmix64(splitmix64(seed) ^ splitmix64(~substream))) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t substream() const noexcept { return substream_; }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  double normal() { return normal_(engine_); }

  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

  /// log of a Gamma(shape, 1) variate; stays finite for small shapes where
  /// the variate itself underflows.
  double log_gamma_variate(double shape) {
    if (shape >= 1.0) return std::log(gamma(shape));
    const double g = gamma(shape + 1.0);
    return std::log(g) + std::log(uniform()) / shape;
  }

  double beta(double a, double b) {
    const double lx = log_gamma_variate(a);
    const double ly = log_gamma_variate(b);
    return 1.0 / (1.0 + std::exp(ly - lx));
  }

  std::int64_t binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    return std::binomial_distribution<std::int64_t>(n, p)(engine_);
  }

  std::int64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t substream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace lrb
