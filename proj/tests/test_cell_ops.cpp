#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/cell_ops.hpp"

using namespace lacuna;
constexpr double pi = std::numbers::pi;

namespace {

CellFunction periodic_cos(int k) {  // cos 2 pi k xi
  CellFunction f(Parity::Periodic);
  f.set(2 * k, 0.5);
  return f;
}

double max_diff(const CellFunction& u, const std::function<double(double)>& g) {
  double e = 0;
  for (int i = 0; i <= 50; ++i) e = std::max(e, std::abs(u(i / 50.0) - g(i / 50.0)));
  return e;
}

}  // namespace

TEST(ApplyL0, Zero) { EXPECT_EQ(apply_L0(CellFunction(Parity::Periodic)).coeff_norm(), 0.0); }

TEST(ApplyL0, CosineAndSine) {
  auto u = apply_L0(periodic_cos(1));
  EXPECT_LT(max_diff(u, [](double x) { return std::cos(2 * pi * x) / (4 * pi * pi); }), 1e-15);
  CellFunction s(Parity::Periodic);
  s.set(4, std::complex<double>(0, -0.5));  // sin 4 pi xi
  auto v = apply_L0(s);
  EXPECT_LT(max_diff(v, [](double x) { return std::sin(4 * pi * x) / (16 * pi * pi); }), 1e-15);
}

TEST(ApplyL0, MeanViolation) { EXPECT_THROW(apply_L0(CellFunction::constant(1.0)), SolvabilityError); }

TEST(ApplyL0, RightInverseAndSymmetry) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int t = 0; t < 10; ++t) {
    CellFunction f(Parity::Periodic), h(Parity::Periodic);
    for (int m = 2; m <= 12; m += 2) f.set(m, {U(g), U(g)}), h.set(m, {U(g), U(g)});
    auto u = apply_L0(f);
    auto back = u.derivative_fn(2) * -1.0;
    EXPECT_LT((back - f).coeff_norm(), 1e-10);
    EXPECT_NEAR(inner(u, h), inner(f, apply_L0(h)), 1e-12);
  }
}

TEST(ApplyLn, Examples) {
  EXPECT_EQ(apply_Ln(CellFunction(Parity::Antiperiodic), 1).coeff_norm(), 0.0);
  auto c = apply_Ln(CellFunction::cos_mode(3) * (1 / std::sqrt(2.0)), 1);
  EXPECT_LT(max_diff(c, [](double x) { return std::cos(3 * pi * x) / (8 * pi * pi); }), 1e-15);
  auto s = apply_Ln(CellFunction::sin_mode(3) * (1 / std::sqrt(2.0)), 1);
  EXPECT_LT(max_diff(s, [](double x) { return std::sin(3 * pi * x) / (8 * pi * pi); }), 1e-15);
  // antiperiodic boundary conditions
  EXPECT_NEAR(c(1.0), -c(0.0), 1e-15);
  EXPECT_NEAR(c.derivative(1.0), -c.derivative(0.0), 1e-13);
}

TEST(ApplyLn, KernelViolation) { EXPECT_THROW(apply_Ln(CellFunction::cos_mode(1), 1), SolvabilityError); }

TEST(EdgeSeriesZero, FirstCoefficient) {
  auto s = edge_series_zero(PeriodicPotential::cosine(), 3);
  EXPECT_EQ(s.coeff(0), 0.0);
  EXPECT_NEAR(s.coeff(1), -1 / (8 * pi * pi), 1e-15);
  EXPECT_LT(s.coeff(1), 0.0);
}

TEST(EdgeSeriesZero, MatchesDirectQuadrature) {
  // mu_{0,1} = -int (A - <A>)^2 with A(xi) = int_0^xi a
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int t = 0; t < 10; ++t) {
    PeriodicPotential a({U(g), U(g), U(g)}, {U(g), U(g), U(g)});
    const int N = 4000;
    std::vector<double> A(N + 1, 0.0);
    for (int i = 0; i < N; ++i) {
      double x = double(i) / N, h = 1.0 / N;
      A[i + 1] = A[i] + h / 6 * (a(x) + 4 * a(x + h / 2) + a(x + h));
    }
    double m = 0, q = 0;
    for (int i = 0; i < N; ++i) m += 0.5 * (A[i] + A[i + 1]) / N;
    for (int i = 0; i <= N; ++i) q += (i == 0 || i == N ? 0.5 : 1.0) * (A[i] - m) * (A[i] - m) / N;
    EXPECT_NEAR(edge_series_zero(a, 1).coeff(1), -q, 1e-10);
  }
}

TEST(ClassifyLacuna, Examples) {
  auto c1 = classify_lacuna(PeriodicPotential::cosine(), 1);
  EXPECT_EQ(c1.N, 1);
  EXPECT_NEAR(c1.alpha, 0.0, 1e-14);
  auto c2 = classify_lacuna(PeriodicPotential::cosine(), 2);
  EXPECT_GE(c2.N, 2);
  auto s1 = classify_lacuna(PeriodicPotential::sine(), 1);
  EXPECT_EQ(s1.N, 1);
  EXPECT_NEAR(std::abs(s1.alpha), pi / 4, 1e-14);
}

TEST(ClassifyLacuna, SymmetryAtDepth) {
  PeriodicPotential a({0.0, 0.7}, {0.0, 0.0, 0.4});
  auto c = classify_lacuna(a, 1);
  ASSERT_FALSE(c.collapsed);
  ASSERT_GE(static_cast<int>(c.M.size()), c.N);
  EXPECT_LT(std::abs(c.M[c.N - 1][1] - c.M[c.N - 1][2]), 1e-10);
}

TEST(EdgeSeriesN, LeadingCoefficients) {
  auto E = edge_series_n(PeriodicPotential::cosine(), 1, 2);
  EXPECT_NEAR(E.plus.coeff(0), 0.5, 1e-15);
  EXPECT_NEAR(E.minus.coeff(0), -0.5, 1e-15);
  EXPECT_NEAR(E.plus.coeff(1), -1 / (32 * pi * pi), 1e-14);
  auto E2 = edge_series_n(PeriodicPotential::cosine(), 2, 0);
  EXPECT_NEAR(E2.plus.coeff(0), E2.minus.coeff(0), 1e-15);
}

TEST(EdgeSeriesN, RandomModuli) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> U(-1, 1);
  int tested = 0;
  while (tested < 20) {
    PeriodicPotential a({U(g), U(g), U(g), U(g)}, {U(g), U(g), U(g), U(g)});
    int n = 1 + tested % 4;
    auto [an, bn] = fourier_pair(a, n);
    if (std::hypot(an, bn) < 0.05) continue;
    ++tested;
    auto E = edge_series_n(a, n, 0);
    EXPECT_NEAR(E.plus.coeff(0), std::hypot(an, bn), 1e-12);
    EXPECT_NEAR(E.minus.coeff(0), -std::hypot(an, bn), 1e-12);
  }
}

TEST(EssentialSpectrum, LeadingGap) {
  auto bands = essential_spectrum(PeriodicPotential::cosine(), 0.1, 1, 0);
  ASSERT_GE(bands.size(), 2u);
  double c = pi * pi / 0.01;
  EXPECT_NEAR(bands[0].upper, c - 0.5, 1e-12);
  EXPECT_NEAR(bands[1].lower, c + 0.5, 1e-12);
}

TEST(EssentialSpectrum, LowestEdgeSlope) {
  auto bands = essential_spectrum(PeriodicPotential::cosine(), 0.01, 1, 1);
  EXPECT_NEAR(bands[0].lower, -1e-4 / (8 * pi * pi), 1e-15);
}
