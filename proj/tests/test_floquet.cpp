#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/cell_ops.hpp"
#include "lacuna/floquet.hpp"
#include "lacuna/oracle.hpp"

using namespace lacuna;
constexpr double pi = std::numbers::pi;

TEST(Monodromy, FreeEquation) {
  PeriodicPotential zero;
  const double eps = 0.1;
  for (double M : {0.5, 2.0, 9.0}) {
    auto m = monodromy(zero, eps, M / (eps * eps));
    EXPECT_NEAR(m.D, 2 * std::cos(std::sqrt(M)), 1e-12);
    EXPECT_NEAR(m.phi1, std::cos(std::sqrt(M)), 1e-12);
  }
  auto m = monodromy(zero, eps, Energy{1, 0.0});
  EXPECT_NEAR(m.D, -2.0, 1e-14);
  EXPECT_NEAR(m.edge_dev, 0.0, 1e-14);
}

TEST(Monodromy, AntiperiodicPointIsInsideTheGap) {
  auto m = monodromy(PeriodicPotential::cosine(), 0.1, Energy{1, 0.0});
  EXPECT_LT(m.D, -2.0);  // the edges sit at pi^2/eps^2 +- 1/2, so |D| > 2 between them
}

TEST(Monodromy, WronskianRandom) {
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 100; ++i) {
    PeriodicPotential a({4 * U(g) - 2, 2 * U(g) - 1}, {2 * U(g) - 1});
    double eps = 0.02 + 0.5 * U(g);
    double lam = -3 + U(g) * 1.5 * pi * pi / (eps * eps);
    EXPECT_NEAR(monodromy(a, eps, lam).wronskian(), 1.0, 1e-10);
  }
}

TEST(Multipliers, Examples) {
  auto a = multipliers(2.0);
  EXPECT_NEAR(a.kappa.real(), 1.0, 1e-15);
  auto b = multipliers(-2.0);
  EXPECT_NEAR(b.kappa.real(), -1.0, 1e-15);
  auto c = multipliers(2.5);
  EXPECT_NEAR(c.kappa.real(), 2.0, 1e-15);
  EXPECT_NEAR(c.kappa_inv.real(), 0.5, 1e-15);
  EXPECT_TRUE(c.in_gap);
  auto d = multipliers(1.0);
  EXPECT_FALSE(d.in_gap);
  EXPECT_NEAR(std::abs(d.kappa), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(d.kappa * d.kappa_inv - 1.0), 0.0, 1e-12);
}

TEST(Bloch, FreeDecay) {
  PeriodicPotential zero;
  const double eps = 0.1, lam = -4.0;
  auto [p, m] = bloch_solutions(zero, eps, lam);
  // Theta+ ~ exp(-eps sqrt(-lam) xi): log multiplier per cell
  EXPECT_NEAR(std::abs(p.log_multiplier.real()), eps * 2.0, 1e-12);
  EXPECT_NEAR(p.du0 / p.u0, -eps * 2.0, 1e-12);
  EXPECT_NEAR(m.du0 / m.u0, eps * 2.0, 1e-12);
}

TEST(Bloch, WronskianFormula) {
  auto a = PeriodicPotential::cosine();
  const double eps = 0.1;
  auto md = monodromy(a, eps, Energy{1, 0.2});
  auto [p, m] = bloch_solutions(md);
  auto mu = multipliers(md);
  double k = mu.kappa.real(), ki = mu.kappa_inv.real();
  // unnormalised data (phi_2(1), kappa^{-+1} - phi_1(1)); Theta+ uses the multiplier of modulus < 1
  double kp = std::abs(k) < 1 ? k : ki, km = std::abs(k) < 1 ? ki : k;
  double np = std::hypot(md.phi2, kp - md.phi1), nm = std::hypot(md.phi2, km - md.phi1);
  double W = bloch_wronskian(p, m) * np * nm;
  EXPECT_NEAR(std::abs(W), std::abs((km - kp) * md.phi2), 1e-9 * std::abs((km - kp) * md.phi2));
}

TEST(Bloch, InsideBandThrows) {
  EXPECT_THROW(bloch_solutions(PeriodicPotential::cosine(), 0.1, 50.0), NoDecayError);
}

TEST(Bloch, PeriodicFactor) {
  auto a = PeriodicPotential::cosine();
  Energy e{1, 0.1};
  auto md = monodromy(a, 0.1, e);
  auto [p, m] = bloch_solutions(md);
  auto s = periodic_factor_samples(a, 0.1, e, p, 9);
  // inside the first gap the multiplier is negative, so the factor is antiperiodic
  EXPECT_NEAR(s.front(), -s.back(), 1e-10 * std::abs(s.front()) + 1e-12);
}

TEST(BandEdges, FreeGapIsDegenerate) {
  auto r = band_edges_numeric(PeriodicPotential::cosine(1e-14), 0.1, 1);
  EXPECT_NEAR(r.upper.nu, r.lower.nu, 1e-10);
}

TEST(BandEdges, FirstGapAndLowestEdge) {
  auto a = PeriodicPotential::cosine();
  auto E = edge_series_n(a, 1, 1);
  auto r = band_edges_numeric(a, 0.1, 1);
  EXPECT_NEAR(r.upper.nu, 0.5, 0.1 * 0.1);
  EXPECT_NEAR(r.lower.nu, -0.5, 0.1 * 0.1);
  EXPECT_NEAR(r.upper.nu, E.plus.edge_offset(0.1, 1), 1e-4 * 0.1 * 0.1);
  for (const auto& e : {r.upper, r.lower}) EXPECT_LT(std::abs(monodromy(a, 0.1, e).edge_dev), 1e-10);
  auto z = band_edges_numeric(a, 0.1, 0);
  EXPECT_NEAR(z.upper.nu, -0.01 / (8 * pi * pi), std::pow(0.1, 4));
}

TEST(BandEdges, DiscriminantAtSeriesEdgeConverges) {
  // D - 2 at the truncated lowest-edge series decays like eps^{2(order+1)} or faster
  auto a = PeriodicPotential::cosine();
  for (int order : {1, 2}) {
    auto z = edge_series_zero(a, order);
    std::vector<std::pair<double, double>> smp;
    for (double eps : {0.2, 0.14, 0.1, 0.07}) {
      auto m = monodromy(a, eps, Energy{0, z.edge_offset(eps, order)});
      smp.push_back({eps, std::abs(m.edge_dev)});
    }
    EXPECT_GE(fit_convergence_order(smp).order, 2 * (order + 1) - 0.5);
  }
}
