#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/cell_ops.hpp"
#include "lacuna/semi_lacuna.hpp"

using namespace lacuna;
constexpr double pi = std::numbers::pi;

namespace {

CompactPotential resonant_bump() {
  auto bump = [](double A) { return CompactPotential(CompactKind::PolyBump, {-A, 0.3}, 2.0); };
  double lo = 4.0, hi = 4.5;
  int klo = count_below(bump(lo), 0.0);
  while (hi - lo > 1e-13) {
    double m = 0.5 * (lo + hi);
    (count_below(bump(m), 0.0) == klo ? lo : hi) = m;
  }
  return bump(0.5 * (lo + hi));
}

}  // namespace

TEST(BoundStateExpansion, PoschlTellerCoefficients) {
  auto a = PeriodicPotential::cosine();
  CompactPotential V(CompactKind::PoschlTeller, {2.0, 1.0, 2.0}, 10.0);
  auto sp = discrete_spectrum(V);
  ASSERT_EQ(sp.count(), 1);
  const auto& st = sp.states[0];
  auto r = bound_state_expansion(V, a, st, 6);
  auto E = edge_series_zero(a, 3);
  EXPECT_EQ(r.series.base, st.lambda);
  EXPECT_EQ(r.series.lambda[1], 0.0);
  EXPECT_NEAR(r.series.lambda[2], E.coeff(1), 1e-12);
  EXPECT_NEAR(r.series.lambda[3], 0.0, 1e-12);
  double l4 = E.coeff(2) - 4 * st.dpsi_norm_sq() / (32 * std::pow(pi, 4));
  EXPECT_NEAR(r.series.lambda[4], l4, 1e-12);
  EXPECT_LT(r.series.lambda[4] - E.coeff(2), 0.0);  // the level sits below the edge shift at order 4
  EXPECT_LT(r.orthogonality, 1e-8);
  EXPECT_LT(r.mean_residual, 1e-6);
}

TEST(BoundStateExpansion, RandomIdentities) {
  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> U(0, 1);
  int done = 0;
  while (done < 10) {
    PeriodicPotential a({2 * U(g) - 1, 2 * U(g) - 1}, {2 * U(g) - 1});
    CompactPotential V(CompactKind::PolyBump, {-3 - 3 * U(g), 2 * U(g) - 1}, 1 + U(g));
    auto sp = discrete_spectrum(V);
    if (sp.count() == 0) continue;
    ++done;
    auto r = bound_state_expansion(V, a, sp.states.back(), 4);
    EXPECT_NEAR(r.series.lambda[2], edge_series_zero(a, 1).coeff(1), 1e-10);
    EXPECT_NEAR(r.series.lambda[3], 0.0, 1e-10);
    EXPECT_NEAR(r.series.lambda[4], edge_series_zero(a, 2).coeff(2) - 4 * sp.states.back().dpsi_norm_sq() * l0_norm_sq(a),
                1e-10);
  }
}

TEST(L0Norm, Cosine) { EXPECT_NEAR(l0_norm_sq(PeriodicPotential::cosine()), 1 / (32 * std::pow(pi, 4)), 1e-18); }

TEST(ResonanceExpansion, Identities) {
  auto V = resonant_bump();
  auto res = resonance_check(V);
  ASSERT_TRUE(res.present());
  auto a = PeriodicPotential::cosine();
  auto q = resonance_expansion(V, a, res, 8);
  auto E = edge_series_zero(a, 4);
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR(q.series.lambda[2 * j], E.coeff(j), 1e-9);
  for (int i : {3, 5, 7}) EXPECT_NEAR(q.series.lambda[i], 0.0, 1e-9);
  EXPECT_NEAR(q.series.tau[2], 0.0, 1e-9);
  EXPECT_NEAR(q.series.tau[3], 0.0, 1e-9);
  double t4 = tau4_resonance(a, res);
  EXPECT_GT(q.series.tau[4], 0.0);
  EXPECT_NEAR(q.series.tau[4], t4, 1e-9 * t4);
  EXPECT_NEAR(q.series.lambda[8], E.coeff(4) - t4 * t4, 1e-9);
  EXPECT_LT(q.consistency, 1e-9);
}

TEST(ResonanceExpansion, CutoffInvariance) {
  auto V = resonant_bump();
  auto res = resonance_check(V);
  auto a = PeriodicPotential({0.8, 0.3}, {0.4});
  SemiLacunaOptions narrow;
  narrow.cutoff_fraction = 0.6;
  auto q1 = resonance_expansion(V, a, res, 8), q2 = resonance_expansion(V, a, res, 8, narrow);
  for (int i = 0; i <= 8; ++i) {
    EXPECT_NEAR(q1.series.lambda[i], q2.series.lambda[i], 1e-10);
    EXPECT_NEAR(q1.series.tau[i], q2.series.tau[i], 1e-10);
  }
}

TEST(ResonanceExpansion, RequiresResonance) {
  CompactPotential V(CompactKind::PoschlTeller, {2.0, 1.0, 1.5}, 6.0);
  ASSERT_FALSE(resonance_check(V).present());
  EXPECT_THROW(resonance_expansion(V, PeriodicPotential::cosine(), resonance_check(V)), std::invalid_argument);
}

TEST(CountSemiLacuna, Examples) {
  auto a = PeriodicPotential::cosine();
  auto none = count_semi_lacuna(CompactPotential(CompactKind::Bump, {0.5}, 1.0), a);
  EXPECT_EQ(none.count, 0);
  auto one = count_semi_lacuna(CompactPotential(CompactKind::PoschlTeller, {2.0, 1.0, 2.0}, 10.0), a);
  EXPECT_EQ(one.count, 1);
  EXPECT_FALSE(one.has_resonance_level);
  auto two = count_semi_lacuna(resonant_bump(), a);
  EXPECT_EQ(two.bound_states, 1);
  EXPECT_TRUE(two.has_resonance_level);
  EXPECT_EQ(two.count, 2);
}
