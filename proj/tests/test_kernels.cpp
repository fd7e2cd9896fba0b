#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lrb/kernels.hpp"
#include "lrb/numerics/quadrature.hpp"
#include "lrb/random.hpp"
#include "lrb/stats.hpp"

using lrb::Kernel;
namespace num = lrb::numerics;

TEST(Kernels, DensityExamples) {
  EXPECT_NEAR(Kernel::brownian().density(1.0, 0.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(Kernel::gamma(1.0).density(1.0, 1.0), 0.36787944117144233, 1e-15);
  EXPECT_EQ(Kernel::gamma(1.0).density(0.5, -1.0), 0.0);
}

TEST(Kernels, MassExamples) {
  EXPECT_NEAR(Kernel::poisson(1.0).mass(1.0, 0), 0.36787944117144233, 1e-15);
  EXPECT_EQ(Kernel::poisson(1.0).mass(1.0, -1), 0.0);
  EXPECT_NEAR(Kernel::poisson(2.0).mass(0.5, 1), 0.36787944117144233, 1e-15);
}

TEST(Kernels, Errors) {
  EXPECT_THROW(Kernel::brownian().density(0.0, 1.0), lrb::DomainError);
  EXPECT_THROW(Kernel::brownian().density(-1.0, 1.0), lrb::DomainError);
  EXPECT_THROW(Kernel::poisson(1.0).density(1.0, 1.0), lrb::ClassMismatchError);
  EXPECT_THROW(Kernel::gamma(1.0).mass(1.0, 1), lrb::ClassMismatchError);
  EXPECT_THROW(Kernel::gamma(-1.0), lrb::InvalidSpecError);
  lrb::RandomStream rng(1);
  EXPECT_THROW(Kernel::gamma(1.0).sample_increment(0.0, rng), lrb::DomainError);
}

TEST(Kernels, Normalization) {
  for (double t : {0.1, 0.5, 1.0}) {
    const auto bm = Kernel::brownian().at(t);
    EXPECT_NEAR(num::quad([&](double x) { return bm.likelihood(x); }, lrb::kNegInf, lrb::kInf), 1.0, 1e-8);
    for (double m : {0.5, 1.0, 3.0}) {
      const auto g = Kernel::gamma(m).at(t);
      const double v = num::quad([&](const num::QuadNode& n) { return g.likelihood(n.offset_from(0.0)); }, 0.0,
                                 lrb::kInf, {m * t});
      EXPECT_NEAR(v, 1.0, 1e-8) << "m=" << m << " t=" << t;
    }
    double sum = 0.0;
    for (int i = 0; i < 200; ++i) sum += Kernel::poisson(2.0).mass(t, i);
    EXPECT_NEAR(sum, 1.0, 1e-14);
  }
}

TEST(Kernels, ChapmanKolmogorovBrownian) {
  const auto k = Kernel::brownian();
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double frac : {0.25, 0.5}) {
      const double s = frac * t;
      for (double x : {-1.5, 0.0, 0.7, 2.0}) {
        const auto a = k.at(t - s), b = k.at(s);
        const double conv = num::quad([&](double y) { return a.likelihood(x - y) * b.likelihood(y); }, lrb::kNegInf,
                                      lrb::kInf, {0.0, x});
        worst = std::max(worst, std::abs(conv - k.density(t, x)));
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Kernels, ChapmanKolmogorovGamma) {
  const auto k = Kernel::gamma(2.0);
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (double frac : {0.25, 0.5}) {
      const double s = frac * t;
      for (double x : {0.2, 1.0, 3.0}) {
        const auto a = k.at(t - s), b = k.at(s);
        const double conv = num::quad(
            [&](const num::QuadNode& n) { return a.likelihood(-n.offset_from(x)) * b.likelihood(n.offset_from(0.0)); },
            0.0, x);
        worst = std::max(worst, std::abs(conv - k.density(t, x)));
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Kernels, ChapmanKolmogorovPoisson) {
  const auto k = Kernel::poisson(1.5);
  double worst = 0.0;
  for (double t : {0.5, 1.0}) {
    for (double s : {0.1, 0.3}) {
      for (int x = 0; x < 8; ++x) {
        double conv = 0.0;
        for (int y = 0; y <= x; ++y) conv += k.mass(t - s, x - y) * k.mass(s, y);
        worst = std::max(worst, std::abs(conv - k.mass(t, x)));
      }
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Kernels, SampleMeans) {
  const int n = 100000;
  std::vector<double> bm(n), g(n);
  lrb::RandomStream r1(11), r2(12);
  for (int i = 0; i < n; ++i) {
    bm[i] = Kernel::brownian().sample_increment(1.0, r1);
    g[i] = Kernel::gamma(2.0).sample_increment(0.5, r2);
  }
  const auto sb = lrb::stats::summarize(bm);
  const auto sg = lrb::stats::summarize(g);
  EXPECT_LT(std::abs(sb.mean), 3.0 / std::sqrt(n));
  EXPECT_LT(std::abs(sg.mean - 1.0), 3.0 * sg.std_error);
}

TEST(Kernels, SamplingIsDeterministic) {
  for (auto k : {Kernel::brownian(), Kernel::gamma(0.3), Kernel::poisson(4.0)}) {
    lrb::RandomStream a(99, 4), b(99, 4);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(k.sample_increment(0.7, a), k.sample_increment(0.7, b));
  }
}

TEST(Kernels, KsAgainstAnalyticCdf) {
  const int n = 10000;
  for (auto k : {Kernel::brownian(), Kernel::gamma(0.4), Kernel::gamma(3.0), Kernel::poisson(2.5)}) {
    lrb::RandomStream rng(2024, static_cast<std::uint64_t>(k.family()));
    std::vector<double> xs(n);
    for (auto& x : xs) x = k.sample_increment(0.8, rng);
    const double d = lrb::stats::ks_statistic(xs, [&](double x) { return k.cdf(0.8, x); });
    EXPECT_LT(d, lrb::stats::ks_critical_one_sample(n)) << k.name();
  }
}
