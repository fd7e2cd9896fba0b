#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lrb/random_bridge.hpp"

using lrb::Atom;
using lrb::DensityPart;
using lrb::Kernel;
using lrb::LrbSpec;
using lrb::TerminalLaw;
namespace num = lrb::numerics;

namespace {

LrbSpec brownian_drift(double theta, double T) {
  return lrb::make_lrb(Kernel::brownian(), T, TerminalLaw::from_density(DensityPart::normal(theta * T, T)));
}

LrbSpec binary(Kernel k, double T = 1.0) {
  return lrb::make_lrb(k, T, TerminalLaw({{0.0, 0.5}, {1.0, 0.5}}, std::nullopt));
}

LrbSpec gamma_uniform() {
  return lrb::make_lrb(Kernel::gamma(3.0), 1.0, TerminalLaw::from_density(DensityPart::uniform(0.5, 3.0)));
}

LrbSpec gamma_mixed() {
  return lrb::make_lrb(Kernel::gamma(2.0), 1.0,
                       TerminalLaw({{0.8, 0.3}, {2.5, 0.2}}, DensityPart::gamma(3.0, 0.6, 0.5)));
}

LrbSpec poisson_atoms() {
  return lrb::make_lrb(Kernel::poisson(2.0), 1.0, TerminalLaw({{0.0, 0.2}, {1.0, 0.3}, {4.0, 0.5}}, std::nullopt));
}

// Outer integrals over psi are only as smooth as psi's own quadrature error.
const num::QuadratureOptions loose{1e-9, 1e-8, 3, 8, 12};

double transition_mass_over_y(const LrbSpec& spec, double s, double x, double t) {
  if (spec.kernel.is_discrete()) {
    double sum = 0.0;
    for (int j = 0; j < 200; ++j) sum += lrb::lrb_transition_density(spec, s, x, t, x + j);
    return sum;
  }
  const double lo = spec.kernel.is_subordinator() ? x : lrb::kNegInf;
  std::vector<double> breaks{x, spec.terminal.ess_inf(), spec.terminal.ess_sup()};
  for (const auto& a : spec.terminal.atoms()) breaks.push_back(a.location);
  const double sd = std::sqrt(spec.kernel.increment_variance(t - s));
  for (double k : {-4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0}) breaks.push_back(x + spec.kernel.increment_mean(t - s) + k * sd);
  return num::quad(
      [&](const num::QuadNode& n) {
        const double y = n.z;
        const double step = spec.kernel.at(t - s).likelihood(n.offset_from(x));
        return step == 0.0 ? 0.0 : step * lrb::psi_total(spec, t, y) / lrb::psi_total(spec, s, x);
      },
      lo, lrb::kInf, breaks, loose);
}

}  // namespace

TEST(Psi, TrivialCases) {
  const auto spec = gamma_uniform();
  EXPECT_EQ(lrb::psi_total(spec, 0.0, 123.0), 1.0);
  EXPECT_EQ(lrb::rn_derivative(spec, 0.0, 0.0), 1.0);
  const auto levy = lrb::make_lrb(Kernel::brownian(), 2.0, lrb::levy_terminal_law(Kernel::brownian(), 2.0));
  for (double t : {0.3, 1.0, 1.9}) {
    for (double xi : {-2.0, 0.0, 1.3}) EXPECT_NEAR(lrb::psi_total(levy, t, xi), 1.0, 1e-9);
  }
  const auto glevy = lrb::make_lrb(Kernel::gamma(2.0), 1.0, lrb::levy_terminal_law(Kernel::gamma(2.0), 1.0));
  for (double t : {0.3, 0.8}) {
    for (double xi : {0.01, 0.5, 2.0}) EXPECT_NEAR(lrb::psi_total(glevy, t, xi), 1.0, 1e-9);
  }
}

TEST(Psi, BrownianDriftClosedForm) {
  const auto spec = brownian_drift(0.5, 1.0);
  // exp(theta xi - theta^2 t / 2) = exp(0.4375)
  EXPECT_NEAR(lrb::psi_total(spec, 0.5, 1.0), 1.5488302986341331, 1e-9);
  for (double t : {0.1, 0.5, 0.9}) {
    for (double y : {-1.0, 0.0, 2.0}) {
      EXPECT_NEAR(lrb::rn_derivative(spec, t, y), std::exp(-0.5 * y + 0.125 * t), 1e-9 * std::exp(-0.5 * y));
    }
  }
}

TEST(Psi, GammaKappaClosedForm) {
  const double m = 1.5, T = 1.0, kappa = 1.5;
  const auto spec = lrb::make_lrb(Kernel::gamma(m), T, TerminalLaw::from_density(DensityPart::gamma(m * T, kappa)));
  for (double t : {0.1, 0.4, 0.8}) {
    for (double y : {0.05, 0.6, 2.5}) {
      const double ref = std::pow(kappa, -m * t) * std::exp((1.0 - 1.0 / kappa) * y);
      EXPECT_NEAR(lrb::psi_total(spec, t, y), ref, 1e-9 * ref) << t << " " << y;
    }
  }
}

TEST(Psi, ParametricShortcutMatchesQuadrature) {
  const std::vector<LrbSpec> specs{
      brownian_drift(0.5, 1.0),
      lrb::make_lrb(Kernel::brownian(), 2.0, TerminalLaw({{-0.4, 0.25}}, DensityPart::normal(0.3, 0.2, 0.75))),
      lrb::make_lrb(Kernel::brownian(), 1.0, TerminalLaw::from_density(DensityPart::uniform(-1.0, 2.0))),
      lrb::make_lrb(Kernel::brownian(), 1.0, TerminalLaw({{0.1, 0.5}}, DensityPart::uniform(0.5, 0.7, 0.5))),
      lrb::make_lrb(Kernel::gamma(1.5), 1.0, TerminalLaw({{0.8, 0.4}}, DensityPart::gamma(1.5, 0.7, 0.6))),
      lrb::make_lrb(Kernel::gamma(2.0), 1.0, lrb::levy_terminal_law(Kernel::gamma(2.0), 1.0)),
  };
  for (const auto& spec : specs) {
    for (double t : {0.05, 0.5, 0.95}) {
      for (double y : {-1.5, 0.05, 0.6, 2.5, 6.0}) {
        if (spec.kernel.is_subordinator() && y < 0.0) continue;
        const double a = lrb::psi_total(spec, t, y);
        const double b = lrb::psi_total_numeric(spec, t, y);
        EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, b)) << t << " " << y;
        const lrb::TerminalTilt tilt(spec, t, y);
        const double first = tilt.integrate([](const num::QuadNode& n) { return n.z; });
        EXPECT_NEAR(lrb::posterior_mean(spec, t, y), first / b, 1e-8 * std::max(1.0, std::abs(first / b)))
            << t << " " << y;
      }
    }
  }
}

TEST(Psi, AffineFitDetectsLevyRecovery) {
  const std::vector<double> ts{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<double> ys{-1.0, 0.0, 0.5, 1.5};
  const auto fit = lrb::fit_affine_log_psi(brownian_drift(0.7, 1.0), ts, ys);
  EXPECT_LT(fit.max_residual, 1e-8);
  EXPECT_NEAR(fit.b, 0.7, 1e-8);
  EXPECT_NEAR(fit.c, -0.245, 1e-8);
  const std::vector<double> ys2{0.2, 0.5, 0.9};
  EXPECT_GT(lrb::fit_affine_log_psi(binary(Kernel::brownian()), ts, ys2).max_residual, 1e-3);
}

TEST(Spec, Validation) {
  EXPECT_THROW(lrb::make_lrb(Kernel::gamma(1.0), 1.0, TerminalLaw::point_mass(-1.0)), lrb::InvalidSpecError);
  EXPECT_THROW(lrb::make_lrb(Kernel::gamma(1.0), 1.0, TerminalLaw::from_density(DensityPart::normal(1.0, 1.0))),
               lrb::InvalidSpecError);
  EXPECT_THROW(lrb::make_lrb(Kernel::poisson(1.0), 1.0, TerminalLaw::point_mass(0.5)), lrb::InvalidSpecError);
  EXPECT_THROW(lrb::make_lrb(Kernel::brownian(), 1.0, TerminalLaw({{0.0, 0.5}}, std::nullopt)),
               lrb::InvalidSpecError);
  EXPECT_THROW(lrb::make_lrb(Kernel::brownian(), 0.0, TerminalLaw::point_mass(0.0)), lrb::InvalidSpecError);
  EXPECT_NO_THROW(poisson_atoms());
  EXPECT_NO_THROW(gamma_mixed());
}

TEST(Transition, NormalizesToOne) {
  EXPECT_NEAR(transition_mass_over_y(brownian_drift(0.3, 1.0), 0.2, 0.4, 0.6), 1.0, 1e-8);
  EXPECT_NEAR(transition_mass_over_y(binary(Kernel::brownian()), 0.1, -0.3, 0.7), 1.0, 1e-8);
  EXPECT_NEAR(transition_mass_over_y(gamma_uniform(), 0.2, 0.3, 0.5), 1.0, 1e-8);
  EXPECT_NEAR(transition_mass_over_y(gamma_mixed(), 0.0, 0.0, 0.4), 1.0, 1e-8);
  EXPECT_NEAR(transition_mass_over_y(poisson_atoms(), 0.3, 1.0, 0.8), 1.0, 1e-12);
}

TEST(Transition, ReducesToKernelForLevyLaw) {
  const auto levy = lrb::make_lrb(Kernel::brownian(), 1.0, lrb::levy_terminal_law(Kernel::brownian(), 1.0));
  EXPECT_NEAR(lrb::lrb_transition_density(levy, 0.2, 0.1, 0.6, -0.4), Kernel::brownian().density(0.4, -0.5), 1e-10);
}

TEST(Transition, PointMassGivesBridge) {
  const auto spec = lrb::make_lrb(Kernel::gamma(2.0), 1.0, TerminalLaw::point_mass(1.7));
  const lrb::BridgeSpec b{Kernel::gamma(2.0), 0.3, 0.4, 1.0, 1.7};
  for (double y : {0.5, 1.0, 1.6}) {
    EXPECT_NEAR(lrb::lrb_transition_density(spec, 0.3, 0.4, 0.6, y), lrb::bridge_transition_density(b, 0.6, y),
                1e-12);
  }
}

TEST(Transition, BinaryExpectation) {
  const auto spec = binary(Kernel::brownian());
  const double m = num::quad([&](double y) { return y * lrb::lrb_transition_density(spec, 0.0, 0.0, 0.5, y); },
                             lrb::kNegInf, lrb::kInf, {-1.0, 0.0, 0.5, 1.0, 2.0});
  EXPECT_NEAR(m, 0.25, 1e-9);
  EXPECT_NEAR(lrb::conditional_mean_at(spec, 0.0, 0.0, 0.5), 0.25, 1e-15);
}

TEST(Transition, Errors) {
  const auto spec = lrb::make_lrb(Kernel::gamma(1.0), 1.0, TerminalLaw::from_density(DensityPart::uniform(0.5, 1.0)));
  EXPECT_THROW(lrb::lrb_transition_density(spec, 0.2, 0.1, 1.0, 0.3), lrb::DomainError);
  EXPECT_THROW(lrb::lrb_transition_density(spec, 0.2, 2.0, 0.5, 2.3), lrb::UnreachableStateError);
  EXPECT_THROW(lrb::psi_total(spec, 1.0, 0.3), lrb::DomainError);
}

TEST(Posterior, Examples) {
  const auto spec = binary(Kernel::brownian());
  const auto post = lrb::terminal_posterior(spec, 0.5, 0.25);
  ASSERT_EQ(post.atoms().size(), 2u);
  EXPECT_NEAR(post.atoms()[0].weight, 0.5, 1e-15);
  EXPECT_NEAR(post.atoms()[1].weight, 0.5, 1e-15);

  const auto pm = lrb::make_lrb(Kernel::gamma(1.0), 1.0, TerminalLaw::point_mass(2.0));
  const auto p2 = lrb::terminal_posterior(pm, 0.7, 1.2);
  ASSERT_EQ(p2.atoms().size(), 1u);
  EXPECT_NEAR(p2.atoms()[0].weight, 1.0, 1e-14);
  EXPECT_EQ(p2.atoms()[0].location, 2.0);

  const auto g = gamma_uniform();
  EXPECT_EQ(lrb::terminal_posterior(g, 0.0, 0.0).density()->parametric(), g.terminal.density()->parametric());
}

TEST(Posterior, TotalMassIsOne) {
  for (const auto& [spec, s, xi] : std::vector<std::tuple<LrbSpec, double, double>>{
           {brownian_drift(0.4, 1.0), 0.3, 0.7},
           {gamma_uniform(), 0.2, 0.4},
           {gamma_uniform(), 0.8, 2.4},
           {gamma_mixed(), 0.5, 0.6},
           {poisson_atoms(), 0.5, 1.0}}) {
    const auto post = lrb::terminal_posterior(spec, s, xi);
    EXPECT_NEAR(post.total_mass(), 1.0, 1e-10);
  }
}

TEST(Posterior, BrownianNormalPriorIsNormal) {
  // nu = N(mu, v): posterior density is normal with precision 1/v + 1/(T-s) - 1/T.
  const double mu = 0.3, v = 2.0, T = 1.0, s = 0.4, xi = 0.9;
  const auto spec = lrb::make_lrb(Kernel::brownian(), T, TerminalLaw::from_density(DensityPart::normal(mu, v)));
  const double prec = 1.0 / v + 1.0 / (T - s) - 1.0 / T;
  const double mean = (mu / v + xi / (T - s)) / prec;
  EXPECT_NEAR(lrb::posterior_mean(spec, s, xi), mean, 1e-10);
  EXPECT_NEAR(lrb::conditional_moment(spec, s, xi, 2), 1.0 / prec + mean * mean, 1e-9);
}

TEST(Posterior, MomentExamples) {
  EXPECT_NEAR(lrb::conditional_moment(binary(Kernel::brownian()), 0.0, 0.0, 2), 0.5, 1e-15);
  const auto pm = lrb::make_lrb(Kernel::brownian(), 2.0, TerminalLaw::point_mass(1.5));
  EXPECT_NEAR(lrb::conditional_mean_at(pm, 0.5, -0.3, 1.2), ((2.0 - 1.2) * -0.3 + (1.2 - 0.5) * 1.5) / 1.5, 1e-14);
}

TEST(Posterior, InfiniteMomentDetected) {
  // Cauchy-like prior: no first moment.
  DensityPart::Hints h;
  h.center = 0.0;
  h.scale = 1.0;
  h.tail = lrb::TailClass::heavy;
  h.breakpoints = {-1.0, 0.0, 1.0};
  const DensityPart cauchy(
      [](double base, double offset) {
        const double z = base + offset;
        return -std::log(M_PI * (1.0 + z * z));
      },
      1.0, h);
  const auto spec = lrb::make_lrb(Kernel::brownian(), 1.0, TerminalLaw::from_density(cauchy));
  EXPECT_THROW(lrb::conditional_moment(spec, 0.0, 0.0, 1), lrb::InfiniteMomentError);
  // Gaussian filtering restores all moments.
  EXPECT_NO_THROW(lrb::conditional_moment(spec, 0.5, 0.3, 2));
}

TEST(Restart, IdentityAndTower) {
  const auto spec = gamma_mixed();
  const auto same = lrb::restart(spec, 0.0, 0.0);
  EXPECT_EQ(same.horizon, spec.horizon);

  // restart(restart(spec, s1, x1), s2 - s1, x2 - x1) == restart(spec, s2, x2)
  const double s1 = 0.2, x1 = 0.3, s2 = 0.6, x2 = 0.9;
  const auto twice = lrb::restart(lrb::restart(spec, s1, x1), s2 - s1, x2 - x1);
  const auto once = lrb::restart(spec, s2, x2);
  ASSERT_EQ(twice.terminal.atoms().size(), once.terminal.atoms().size());
  for (std::size_t i = 0; i < once.terminal.atoms().size(); ++i) {
    EXPECT_NEAR(twice.terminal.atoms()[i].location, once.terminal.atoms()[i].location, 1e-12);
    EXPECT_NEAR(twice.terminal.atoms()[i].weight, once.terminal.atoms()[i].weight, 1e-10);
  }
  for (double w : {0.05, 0.4, 1.0, 2.5}) {
    EXPECT_NEAR(twice.terminal.density()->value(w), once.terminal.density()->value(w), 1e-10);
  }
}

TEST(Restart, FiniteDimensionalLawsAgree) {
  for (const auto& spec : {gamma_uniform(), brownian_drift(0.4, 1.0), binary(Kernel::brownian())}) {
    const double s = 0.3, xi = 0.6;
    const auto re = lrb::restart(spec, s, xi);
    const std::vector<double> t_orig{0.5, 0.8}, x_orig{0.9, 1.4};
    const std::vector<double> t_re{0.2, 0.5}, x_re{0.3, 0.8};
    const double lhs = lrb::conditional_fdd(spec, s, xi, t_orig, x_orig);
    const double rhs = lrb::conditional_fdd(re, 0.0, 0.0, t_re, x_re);
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(Increments, SingleIntervalIsTerminalLaw) {
  const auto levy = lrb::make_lrb(Kernel::brownian(), 1.0, lrb::levy_terminal_law(Kernel::brownian(), 1.0));
  const std::vector<double> a{1.0};
  const std::vector<double> y{0.4};
  EXPECT_NEAR(lrb::increment_joint_density(levy, a, y).density, Kernel::brownian().density(1.0, 0.4), 1e-15);
  const auto spec = gamma_mixed();
  const auto r = lrb::increment_joint_density(spec, a, y);
  EXPECT_NEAR(r.density, spec.terminal.density()->value(0.4), 1e-14);
  ASSERT_EQ(r.atoms.size(), 2u);
  EXPECT_NEAR(r.atoms[0].value, 0.3, 1e-14);
}

TEST(Increments, PermutationInvariance) {
  const auto spec = gamma_mixed();
  const std::vector<double> a{0.2, 0.3, 0.5}, y{0.1, 0.4, 0.7};
  const std::vector<double> a2{0.5, 0.2, 0.3}, y2{0.7, 0.1, 0.4};
  EXPECT_NEAR(lrb::increment_joint_density(spec, a, y).density, lrb::increment_joint_density(spec, a2, y2).density,
              1e-14);
}

TEST(Increments, ChainFactorisation) {
  const auto spec = lrb::make_lrb(Kernel::brownian(), 1.0, TerminalLaw::from_density(DensityPart::normal(0.5, 1.0)));
  const std::vector<double> a{0.25, 0.25, 0.5}, y{0.1, -0.2, 0.3};
  const auto bm = Kernel::brownian();
  const double chain = bm.density(0.25, 0.1) * bm.density(0.25, -0.2) * bm.density(0.5, 0.3) *
                       spec.terminal.density()->value(0.2) / bm.density(1.0, 0.2);
  EXPECT_NEAR(lrb::increment_joint_density(spec, a, y).density, chain, 1e-10);
  // Same value as the Markov chain of transition densities times the terminal posterior density.
  const std::vector<double> times{0.25, 0.5}, vals{0.1, -0.1};
  const double fdd = lrb::conditional_fdd(spec, 0.0, 0.0, times, vals);
  const auto post = lrb::terminal_posterior(spec, 0.5, -0.1);
  EXPECT_NEAR(fdd * post.density()->value(0.2), chain, 1e-10);
}

TEST(Increments, Errors) {
  const auto spec = gamma_mixed();
  const std::vector<double> a{0.2, 0.3}, y{0.1, 0.4};
  EXPECT_THROW(lrb::increment_joint_density(spec, a, y), lrb::DomainError);
}

TEST(Reordering, MZeroEqualsJoint) {
  const auto spec = gamma_mixed();
  const std::vector<double> a{0.2, 0.3, 0.5}, y{0.1, 0.4, 0.7};
  const std::vector<std::size_t> id{0, 1, 2};
  const std::vector<double> none;
  EXPECT_NEAR(lrb::reordered_increment_conditional(spec, a, id, none, y).density,
              lrb::increment_joint_density(spec, a, y).density, 1e-15);
}

TEST(Reordering, DependsOnlyOnSum) {
  const auto spec = gamma_mixed();
  const std::vector<double> a{0.1, 0.3, 0.2, 0.4};
  const std::vector<std::size_t> p1{0, 1, 2, 3}, p2{1, 0, 2, 3};
  const std::vector<double> obs1{0.3, 0.1}, obs2{0.05, 0.35};
  const std::vector<double> q{0.2, 0.45};
  const auto v1 = lrb::reordered_increment_conditional(spec, a, p1, obs1, q);
  const auto v2 = lrb::reordered_increment_conditional(spec, a, p2, obs2, q);
  EXPECT_NEAR(v1.density, v2.density, 1e-12);
  ASSERT_EQ(v1.atoms.size(), v2.atoms.size());
  for (std::size_t i = 0; i < v1.atoms.size(); ++i) EXPECT_NEAR(v1.atoms[i].value, v2.atoms[i].value, 1e-12);
}
