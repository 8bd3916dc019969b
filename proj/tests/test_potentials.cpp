#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/potentials.hpp"

using namespace lacuna;

TEST(FourierPair, CosineFirstMode) {
  auto [an, bn] = fourier_pair(PeriodicPotential::cosine(), 1);
  EXPECT_DOUBLE_EQ(an, 0.5);
  EXPECT_DOUBLE_EQ(bn, 0.0);
}

TEST(FourierPair, CosineHasNoSecondMode) {
  auto [an, bn] = fourier_pair(PeriodicPotential::cosine(), 2);
  EXPECT_EQ(an, 0.0);
  EXPECT_EQ(bn, 0.0);
}

TEST(FourierPair, MixedModes) {
  PeriodicPotential a({0.3}, {0.0, 1.0});
  auto [a2, b2] = fourier_pair(a, 2);
  EXPECT_DOUBLE_EQ(a2, 0.0);
  EXPECT_DOUBLE_EQ(b2, 0.5);
  EXPECT_EQ(fourier_pair(a, 7).first, 0.0);
}

TEST(NormalizeZeroMean, SplitsMean) {
  auto [a, shift] = normalize_zero_mean(1.0, {1.0}, {});
  EXPECT_EQ(shift, 1.0);
  EXPECT_NEAR(a(0.0), 1.0, 1e-15);
  auto [b, s2] = normalize_zero_mean(0.0, {}, {2.0});
  EXPECT_EQ(s2, 0.0);
  EXPECT_NEAR(b(0.25), 2.0, 1e-15);
}

TEST(NormalizeZeroMean, RejectsConstant) { EXPECT_THROW(normalize_zero_mean(-0.5, {}, {}), ConfigError); }

TEST(PeriodicPotential, MeanAndParseval) {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    PeriodicPotential a({U(g), U(g), U(g)}, {U(g), U(g)});
    double mean = 0, sq = 0;
    const int N = 512;
    for (int i = 0; i < N; ++i) {
      double v = a((i + 0.5) / N);
      mean += v / N;
      sq += v * v / N;
    }
    EXPECT_LT(std::abs(mean), 1e-12);
    double parseval = 0;
    for (int n = 1; n <= a.max_harmonic(); ++n) {
      auto [an, bn] = fourier_pair(a, n);
      parseval += 2 * (an * an + bn * bn);
    }
    EXPECT_NEAR(parseval, sq, 1e-10);
    EXPECT_NEAR(a.l2_norm_sq(), sq, 1e-10);
  }
}

TEST(SupportRadius, Bump) {
  CompactPotential V(CompactKind::Bump, {1.0}, 1.0);
  EXPECT_EQ(support_radius(V), 1.0);
  EXPECT_EQ(V(1.0), 0.0);
  EXPECT_EQ(V(-1.5), 0.0);
  EXPECT_NEAR(V(0.0), std::exp(-1.0), 1e-15);
}

TEST(SupportRadius, ScaledToZeroIsRejected) {
  CompactPotential V(CompactKind::Bump, {1.0}, 1.0);
  EXPECT_THROW(support_radius(V.scaled(0.0)), ConfigError);
}

TEST(SupportRadius, TruncatedSech) {
  CompactPotential V(CompactKind::PoschlTeller, {2.0, 1.0, 2.0}, 8.0);
  EXPECT_EQ(support_radius(V), 8.0);
  EXPECT_NEAR(V(0.0), -2.0, 1e-15);
  EXPECT_EQ(V(8.0), 0.0);
}

TEST(CompactPotential, KindNamesRoundTrip) {
  for (auto k : {CompactKind::Bump, CompactKind::PoschlTeller, CompactKind::PolyBump, CompactKind::GaussBump,
                 CompactKind::SmoothWell, CompactKind::Tabulated})
    EXPECT_EQ(compact_kind_from_string(to_string(k)), k);
  EXPECT_THROW(compact_kind_from_string("square"), ConfigError);
}

TEST(CompactPotential, Functionals) {
  // odd potential: int V = 0, W vanishes outside the support
  CompactPotential V(CompactKind::PolyBump, {0.0, 1.0}, 1.0);
  EXPECT_LT(std::abs(V.integral()), 1e-14);
  const int N = 200000;
  double h = 2.0 / N, I2 = 0;
  for (int i = 0; i < N; ++i) {
    double v = V(-1 + (i + 0.5) * h);
    I2 += v * v * h;
  }
  EXPECT_NEAR(V.integral_sq(), I2, 1e-10);
  EXPECT_GT(V.sgn_square_integral(), 0.0);
}

TEST(CompactPotential, TabulatedSpline) {
  std::vector<double> p;
  for (int i = 0; i <= 10; ++i) {
    double x = -0.9 + 0.18 * i;
    p.push_back(x);
    p.push_back(std::cos(std::numbers::pi * x / 1.8) * (1 - x * x / 0.81));
  }
  CompactPotential V(CompactKind::Tabulated, p, 1.0);
  EXPECT_NEAR(V(0.0), 1.0, 1e-2);
  EXPECT_EQ(V(0.95), 0.0);
  EXPECT_THROW(CompactPotential(CompactKind::Tabulated, {0, 1, 2, 3}, 1.0), ConfigError);
}
