#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "lrb/numerics/inversion.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/numerics/roots.hpp"
#include "lrb/numerics/special.hpp"
#include "lrb/terminal_law.hpp"

namespace num = lrb::numerics;

TEST(Special, NormalCdfAnchors) {
  EXPECT_EQ(num::normal_cdf(0.0), 0.5);
  EXPECT_NEAR(num::normal_cdf(-0.5), 0.30853753872598688, 1e-15);
  EXPECT_NEAR(num::normal_cdf(0.5), 0.69146246127401312, 1e-15);
  EXPECT_NEAR(num::normal_cdf(-10.0), 7.6198530241604696e-24, 1e-36);
}

TEST(Special, BetaFunction) {
  EXPECT_NEAR(num::beta(0.5, 0.5), std::numbers::pi, 1e-13);
  EXPECT_NEAR(num::beta(2.0, 3.0), 1.0 / 12.0, 1e-15);
}

TEST(Special, IncompleteBetaUniformCase) {
  for (double z : {0.0, 0.1, 0.37, 0.5, 0.99, 1.0}) EXPECT_NEAR(num::incomplete_beta(z, 1.0, 1.0), z, 1e-15);
}

TEST(Special, IncompleteBetaAgainstBoost) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> shape(0.05, 30.0), xs(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double a = shape(gen), b = shape(gen), x = xs(gen);
    const double ref = boost::math::ibeta(a, b, x);
    const double got = num::incomplete_beta(x, a, b);
    if (ref > 1e-280) worst = std::max(worst, std::abs(got - ref) / ref);
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Special, IncompleteBetaReflection) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> shape(0.1, 20.0), xs(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = shape(gen), b = shape(gen), x = xs(gen);
    EXPECT_NEAR(num::incomplete_beta(x, a, b) + num::incomplete_beta(1.0 - x, b, a), 1.0, 1e-13);
  }
}

TEST(Special, IncompleteGammaAgainstBoost) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> shape(0.05, 40.0), xs(0.0, 60.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = shape(gen), x = xs(gen);
    EXPECT_NEAR(num::incomplete_gamma_p(a, x), boost::math::gamma_p(a, x), 2e-13) << a << " " << x;
  }
}

TEST(Special, LogGammaAgainstBoost) {
  for (double x : {1e-3, 0.5, 1.0, 2.5, 10.0, 171.3, 1e4}) {
    EXPECT_NEAR(num::log_gamma(x), boost::math::lgamma(x), 1e-13 * std::max(1.0, std::abs(boost::math::lgamma(x))));
  }
}

TEST(Special, DomainErrors) {
  EXPECT_THROW(num::incomplete_beta(1.5, 1.0, 1.0), lrb::DomainError);
  EXPECT_THROW(num::incomplete_beta(0.5, 0.0, 1.0), lrb::DomainError);
  EXPECT_THROW(num::log_gamma(-1.0), lrb::DomainError);
  EXPECT_THROW(num::beta(-1.0, 1.0), lrb::DomainError);
}

TEST(Quadrature, GaussianSecondMoment) {
  const double v = num::quad([](double z) { return z * z * num::normal_pdf(z); }, lrb::kNegInf, lrb::kInf);
  EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(Quadrature, EndpointSingularity) {
  // int_0^1 x^-0.7 dx = 1/0.3
  const double v = num::quad(
      [](const num::QuadNode& n) { return std::pow(n.offset_from(0.0), -0.7); }, 0.0, 1.0);
  EXPECT_NEAR(v, 1.0 / 0.3, 1e-9);
}

TEST(Quadrature, Linearity) {
  auto f = [](double z) { return std::exp(-z * z) * std::cos(z); };
  auto g = [](double z) { return std::exp(-std::abs(z)) * z * z; };
  const double a = 0.3, b = -1.7;
  const double lhs = num::quad([&](double z) { return a * f(z) + b * g(z); }, lrb::kNegInf, lrb::kInf);
  const double rhs = a * num::quad(f, lrb::kNegInf, lrb::kInf) + b * num::quad(g, lrb::kNegInf, lrb::kInf);
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(Quadrature, ExhaustedBudgetThrows) {
  num::QuadratureOptions opt;
  opt.max_level = 3;
  opt.max_depth = 0;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-300;
  EXPECT_THROW(num::integrate([](double z) { return std::sin(1.0 / z); }, 1e-4, 1.0, {}, opt), lrb::NumericError);
}

TEST(MixedMeasure, Examples) {
  const auto delta = lrb::TerminalLaw::point_mass(1.0);
  EXPECT_EQ(delta.integrate([](const num::QuadNode& n) { return n.z * n.z; }), 1.0);

  const auto gauss = lrb::TerminalLaw::from_density(lrb::DensityPart::normal(0.0, 1.0));
  EXPECT_NEAR(gauss.integrate([](const num::QuadNode& n) { return n.z * n.z; }), 1.0, 1e-9);

  const lrb::TerminalLaw mix({{0.0, 0.5}}, lrb::DensityPart::uniform(0.0, 1.0, 0.5));
  EXPECT_NEAR(mix.integrate([](const num::QuadNode& n) { return n.z; }), 0.25, 1e-12);
}

TEST(MixedMeasure, LinearInMixtures) {
  const lrb::TerminalLaw a({{0.3, 1.0}}, std::nullopt);
  const auto b = lrb::TerminalLaw::from_density(lrb::DensityPart::gamma(2.0, 0.5));
  const lrb::TerminalLaw mix({{0.3, 0.25}}, lrb::DensityPart::gamma(2.0, 0.5, 0.75));
  auto h = [](const num::QuadNode& n) { return std::exp(-n.z) * (1.0 + n.z); };
  EXPECT_NEAR(mix.integrate(h), 0.25 * a.integrate(h) + 0.75 * b.integrate(h), 1e-12);
}

TEST(Roots, Examples) {
  EXPECT_NEAR(num::find_root_monotone([](double x) { return x - 2.0; }, 0.0, 5.0), 2.0, 1e-12);
  EXPECT_NEAR(num::find_root_monotone([](double x) { return num::normal_cdf(x) - 0.5; }, -3.0, 3.0), 0.0, 1e-12);
}

TEST(Roots, BracketWideningInvariance) {
  auto f = [](double x) { return std::tanh(x - 0.7) + 0.1 * (x - 0.7); };
  const double r1 = num::find_root_monotone(f, 0.0, 1.0);
  const double r2 = num::find_root_monotone(f, -20.0, 30.0);
  EXPECT_NEAR(r1, r2, 1e-11);
}

TEST(Roots, Errors) {
  EXPECT_THROW(num::find_root_monotone([](double x) { return x * x + 1.0; }, -1.0, 1.0), lrb::NoRootError);
  EXPECT_THROW(num::find_root_monotone([](double x) { return std::sin(3.0 * x); }, -0.5, 2.5), lrb::NonMonotoneError);
}

TEST(Inversion, MatchesNormalQuantile) {
  auto dens = [](double z) { return num::normal_pdf(z); };
  num::CdfTable<decltype(dens)> table(dens, {lrb::kNegInf, -2.0, 0.0, 2.0, lrb::kInf}, 1.0);
  for (double u : {1e-6, 0.01, 0.3, 0.5, 0.8, 0.999}) {
    EXPECT_NEAR(num::normal_cdf(table.quantile(u)), u, 1e-10);
  }
}
