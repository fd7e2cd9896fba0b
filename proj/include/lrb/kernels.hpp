#pragma once

// Marginal-law families of the driving Levy process: f_t(x) for the
// continuous class and Q_t(a_i) for the discrete class.
//
//   brownian        f_t(x) = exp(-x^2 / 2t) / sqrt(2 pi t)
//   gamma(m)        f_t(x) = 1{x>0} x^(mt-1) e^(-x) / Gamma(mt)   (unit scale)
//   poisson(lambda) Q_t(i) = e^(-lambda t) (lambda t)^i / i!,  lattice a_i = i

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "lrb/errors.hpp"
#include "lrb/numerics/special.hpp"
#include "lrb/random.hpp"

namespace lrb {

enum class KernelFamily { brownian, gamma, poisson };
enum class KernelClass { continuous, discrete };

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// f_t (or Q_t) with t frozen: normalisation constants are computed once, so
/// the slice is cheap to evaluate inside quadrature loops.
class KernelSlice {
 public:
  KernelSlice(KernelFamily family, double param, double t) : family_(family), t_(t) {
    switch (family_) {
      case KernelFamily::brownian:
        c0_ = -0.5 * std::log(2.0 * std::numbers::pi * t);
        c1_ = 1.0 / (2.0 * t);
        break;
      case KernelFamily::gamma:
        c1_ = param * t - 1.0;
        c0_ = -numerics::log_gamma(param * t);
        break;
      case KernelFamily::poisson:
        c1_ = std::log(param * t);
        c0_ = -param * t;
        break;
    }
  }

  double time() const noexcept { return t_; }

  /// log f_t(x), or log Q_t(x) for lattice x; -inf off the support.
  double log_likelihood(double x) const {
    switch (family_) {
      case KernelFamily::brownian:
        return c0_ - x * x * c1_;
      case KernelFamily::gamma:
        if (!(x > 0.0)) return kNegInf;
        return c1_ * std::log(x) - x + c0_;
      case KernelFamily::poisson: {
        const double i = std::nearbyint(x);
        if (i < 0.0 || std::abs(x - i) > 1e-9) return kNegInf;
        return i * c1_ + c0_ - numerics::log_gamma(i + 1.0);
      }
    }
    return kNegInf;
  }

  double likelihood(double x) const { return std::exp(log_likelihood(x)); }

 private:
  KernelFamily family_;
  double t_;
  double c0_ = 0.0;
  double c1_ = 0.0;
};

/// Immutable description of a Levy marginal-law family.
class Kernel {
 public:
  static Kernel brownian() { return Kernel(KernelFamily::brownian, 0.0); }

  static Kernel gamma(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidSpecError("gamma kernel: m must be positive and finite");
    return Kernel(KernelFamily::gamma, m);
  }

  static Kernel poisson(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw InvalidSpecError("poisson kernel: lambda must be positive and finite");
    }
    return Kernel(KernelFamily::poisson, lambda);
  }

  KernelFamily family() const noexcept { return family_; }
  KernelClass kernel_class() const noexcept {
    return family_ == KernelFamily::poisson ? KernelClass::discrete : KernelClass::continuous;
  }
  bool is_continuous() const noexcept { return kernel_class() == KernelClass::continuous; }
  bool is_discrete() const noexcept { return !is_continuous(); }
  /// Increasing paths (gamma, Poisson).
  bool is_subordinator() const noexcept { return family_ != KernelFamily::brownian; }

  /// m for gamma, lambda for Poisson, 0 for Brownian.
  double parameter() const noexcept { return param_; }

  std::string_view name() const noexcept {
    switch (family_) {
      case KernelFamily::brownian: return "brownian";
      case KernelFamily::gamma: return "gamma";
      case KernelFamily::poisson: return "poisson";
    }
    return "";
  }

  KernelSlice at(double t) const {
    require_time(t);
    return KernelSlice(family_, param_, t);
  }

  double log_density(double t, double x) const {
    require_continuous("density");
    return at(t).log_likelihood(x);
  }

  double density(double t, double x) const { return std::exp(log_density(t, x)); }

  double log_mass(double t, std::int64_t i) const {
    require_discrete("mass");
    return at(t).log_likelihood(static_cast<double>(i));
  }

  double mass(double t, std::int64_t i) const { return std::exp(log_mass(t, i)); }

  /// Density or mass, whichever the class provides; x must be a lattice point
  /// for discrete kernels (otherwise 0).
  double likelihood(double t, double x) const { return at(t).likelihood(x); }

  /// Distribution function of the time-t marginal.
  double cdf(double t, double x) const {
    require_time(t);
    switch (family_) {
      case KernelFamily::brownian:
        return numerics::normal_cdf(x / std::sqrt(t));
      case KernelFamily::gamma:
        return x <= 0.0 ? 0.0 : numerics::incomplete_gamma_p(param_ * t, x);
      case KernelFamily::poisson: {
        if (x < 0.0) return 0.0;
        const double k = std::floor(x + 1e-9);
        // P[N <= k] = 1 - P(k+1, lambda t)
        return 1.0 - numerics::incomplete_gamma_p(k + 1.0, param_ * t);
      }
    }
    return 0.0;
  }

  double increment_mean(double dt) const {
    require_time(dt);
    return family_ == KernelFamily::brownian ? 0.0 : param_ * dt;
  }

  double increment_variance(double dt) const {
    require_time(dt);
    return family_ == KernelFamily::brownian ? dt : param_ * dt;
  }

  /// Lower end of the support of every increment.
  double support_lower() const noexcept { return is_subordinator() ? 0.0 : kNegInf; }

  /// Exact draw from f_dt / Q_dt.
  double sample_increment(double dt, RandomStream& rng) const {
    require_time(dt);
    switch (family_) {
      case KernelFamily::brownian:
        return std::sqrt(dt) * rng.normal();
      case KernelFamily::gamma:
        return std::exp(rng.log_gamma_variate(param_ * dt));
      case KernelFamily::poisson:
        return static_cast<double>(rng.poisson(param_ * dt));
    }
    return 0.0;
  }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  Kernel(KernelFamily family, double param) : family_(family), param_(param) {}

  static void require_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel: time must be positive and finite");
  }
  void require_continuous(const char* op) const {
    if (!is_continuous()) throw ClassMismatchError(std::string(op) + " requires a continuous-class kernel");
  }
  void require_discrete(const char* op) const {
    if (!is_discrete()) throw ClassMismatchError(std::string(op) + " requires a discrete-class kernel");
  }

  KernelFamily family_;
  double param_;
};

}  // namespace lrb
