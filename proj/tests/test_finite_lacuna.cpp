#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/finite_lacuna.hpp"

using namespace lacuna;
constexpr double pi = std::numbers::pi;

namespace {

CompactPotential unit_bump(double integral) {
  CompactPotential V1(CompactKind::Bump, {1.0}, 1.0);
  return CompactPotential(CompactKind::Bump, {integral / V1.integral()}, 1.0);
}

CompactPotential odd_bump(double A = 40.0) { return CompactPotential(CompactKind::PolyBump, {0.0, A}, 2.0); }

}  // namespace

TEST(SignTable, ConnectionConstants) {
  EXPECT_DOUBLE_EQ(c0(Side::Plus, 2), 1 / (2 * pi));
  EXPECT_DOUBLE_EQ(c0(Side::Minus, 2), -1 / (2 * pi));
}

TEST(Tau2, Examples) {
  auto a = PeriodicPotential::cosine();
  auto [p, m] = tau2(unit_bump(1.0), a, 1);
  // corrected normalisation: mu int V / (4 pi^2 n^2) with mu = 1/2
  EXPECT_NEAR(m, 1 / (8 * pi * pi), 1e-12);
  EXPECT_NEAR(p, -m, 1e-15);
  auto [p2, m2] = tau2(unit_bump(2.0), a, 1);
  EXPECT_NEAR(m2, 2 * m, 1e-12);
  auto [p0, m0] = tau2(odd_bump(), a, 1);
  EXPECT_NEAR(p0, 0.0, 1e-12);
  EXPECT_NEAR(m0, 0.0, 1e-12);
}

TEST(Tau2, CollapsedLacunaUnsupported) {
  EXPECT_THROW(tau2(unit_bump(1.0), PeriodicPotential::cosine(), 2), UnsupportedLacuna);
}

TEST(Tau4, ThresholdAndSigns) {
  auto V = odd_bump();
  double I2 = V.integral_sq(), W2 = V.sgn_square_integral();
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    auto a = PeriodicPotential::cosine(s);
    auto [p, m] = tau4(V, a, 1);
    EXPECT_GT(m, 0.0);
    EXPECT_EQ(p > 0, (s / 2) * W2 > 2 * I2) << "s = " << s;
  }
  EXPECT_THROW(tau4(unit_bump(1.0), PeriodicPotential::cosine(), 1), DecidingCoefficientError);
}

TEST(EdgeExpansion, MatchesClosedFormsAndEdgeSeries) {
  auto a = PeriodicPotential::cosine();
  auto V = unit_bump(1.0);
  auto E = edge_series_n(a, 1, 3);
  auto [t2p, t2m] = tau2(V, a, 1);
  auto lo = edge_expansion(V, a, 1, Side::Minus, 4), up = edge_expansion(V, a, 1, Side::Plus, 4);
  EXPECT_NEAR(lo.series.lambda[0], -0.5, 1e-15);
  EXPECT_NEAR(up.series.lambda[0], 0.5, 1e-15);
  EXPECT_NEAR(lo.series.lambda[1], 0.0, 1e-15);
  EXPECT_NEAR(lo.series.tau[2], t2m, 1e-8 * std::abs(t2m));
  EXPECT_NEAR(up.series.tau[2], t2p, 1e-8 * std::abs(t2p));
  EXPECT_NEAR(lo.series.tau[3], 0.0, 1e-10);
  EXPECT_NEAR(lo.series.lambda[2], E.minus.coeff(1) + 2 * pi * pi * t2m * t2m / 0.5, 1e-10);
  EXPECT_LT(lo.consistency, 1e-10);
}

TEST(EdgeExpansion, ZeroMeanPotential) {
  auto a = PeriodicPotential::cosine(2.0);
  auto V = odd_bump();
  auto E = edge_series_n(a, 1, 4);
  auto lo = edge_expansion(V, a, 1, Side::Minus, 6);
  auto [t4p, t4m] = tau4(V, a, 1);
  EXPECT_NEAR(lo.series.lambda[2], E.minus.coeff(1), 1e-9);
  EXPECT_NEAR(lo.series.lambda[3], 0.0, 1e-9);
  EXPECT_NEAR(lo.series.lambda[4], E.minus.coeff(2), 1e-9);
  EXPECT_NEAR(lo.series.lambda[5], 0.0, 1e-9);
  EXPECT_NEAR(lo.series.tau[4], t4m, 1e-6 * std::abs(t4m));
  EXPECT_NEAR(lo.series.lambda[6], E.minus.coeff(3) + 2 * pi * pi * t4m * t4m / 1.0, 1e-8);
  auto up = edge_expansion(V, a, 1, Side::Plus, 6);
  EXPECT_NEAR(up.series.tau[4], t4p, 1e-6 * std::abs(t4p));
  EXPECT_NEAR(up.series.lambda[6], E.plus.coeff(3) - 2 * pi * pi * t4p * t4p / 1.0, 1e-8);
}

TEST(EdgeExpansion, CutoffInvariance) {
  auto a = PeriodicPotential({0.7}, {0.4});
  auto V = CompactPotential(CompactKind::PolyBump, {0.5, 1.0, -1.0}, 1.5);
  FiniteLacunaOptions half;
  half.cutoff_fraction = 0.5;
  auto e1 = edge_expansion(V, a, 1, Side::Plus, 4), e2 = edge_expansion(V, a, 1, Side::Plus, 4, half);
  for (int i = 0; i <= 4; ++i) EXPECT_NEAR(e1.series.lambda[i], e2.series.lambda[i], 1e-9);
}

TEST(Existence, IntegralSign) {
  auto a = PeriodicPotential::cosine();
  auto pos = existence(unit_bump(1.0), a, 1);
  EXPECT_EQ(pos.lower, LevelStatus::Exists);
  EXPECT_EQ(pos.upper, LevelStatus::Absent);
  auto neg = existence(unit_bump(-1.0), a, 1);
  EXPECT_EQ(neg.lower, LevelStatus::Absent);
  EXPECT_EQ(neg.upper, LevelStatus::Exists);
  EXPECT_LE(pos.count(), 2);
}

TEST(Existence, ZeroMeanDecidedByTau4) {
  auto V = odd_bump();
  auto two = existence(V, PeriodicPotential::cosine(2.0), 1);
  EXPECT_EQ(two.count(), 2);
  EXPECT_EQ(two.deciding_index_plus.value_or(-1), 4);
  auto one = existence(V, PeriodicPotential::cosine(0.5), 1);
  EXPECT_EQ(one.lower, LevelStatus::Exists);
  EXPECT_EQ(one.upper, LevelStatus::Absent);
}

TEST(OperatorCriterion, SignAgreesWithVerdict) {
  auto a = PeriodicPotential::cosine();
  for (double I : {1.0, -1.0}) {
    auto V = unit_bump(I);
    auto c = operator_criterion_plus(V, a, 1, 0.05);
    EXPECT_EQ(c.value < 0, existence(V, a, 1).upper == LevelStatus::Exists);
    EXPECT_TRUE(c.neumann_converges);
    EXPECT_TRUE(std::isfinite(c.value));
  }
  auto odd = odd_bump();
  for (double s : {2.0, 0.5}) {
    auto as = PeriodicPotential::cosine(s);
    EXPECT_EQ(operator_criterion_plus(odd, as, 1, 0.05).value < 0, existence(odd, as, 1).upper == LevelStatus::Exists);
  }
}

TEST(OperatorCriterion, NodesPerCellConverged) {
  auto V = unit_bump(1.0);
  auto a = PeriodicPotential::cosine();
  CriterionOptions fine;
  fine.min_nodes_per_cell = 24;
  double v1 = operator_criterion_plus(V, a, 1, 0.05).value, v2 = operator_criterion_plus(V, a, 1, 0.05, fine).value;
  EXPECT_NEAR(v1, v2, 1e-9 * std::abs(v1));
}
