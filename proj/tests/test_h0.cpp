#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lacuna/h0.hpp"

using namespace lacuna;
constexpr double pi = std::numbers::pi;

namespace {

CompactPotential pt_well() { return CompactPotential(CompactKind::PoschlTeller, {2.0, 1.0, 2.0}, 10.0); }
CompactPotential smooth_well(double V0) { return CompactPotential(CompactKind::SmoothWell, {V0, 1.0}, 1.05); }

// sign changes of the zero-energy solution started at -x0 with (1, 0), fixed-step RK4
int zero_energy_nodes(const CompactPotential& V) {
  const int steps = 20000;
  double x0 = V.x0(), h = 2 * x0 / steps, x = -x0, u = 1, du = 0;
  int nodes = 0;
  for (int i = 0; i < steps; ++i) {
    auto f = [&](double xx, double uu) { return V(xx) * uu; };
    double k1u = du, k1d = f(x, u);
    double k2u = du + 0.5 * h * k1d, k2d = f(x + 0.5 * h, u + 0.5 * h * k1u);
    double k3u = du + 0.5 * h * k2d, k3d = f(x + 0.5 * h, u + 0.5 * h * k2u);
    double k4u = du + h * k3d, k4d = f(x + h, u + h * k3u);
    double un = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    du += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d);
    if ((un > 0) != (u > 0)) ++nodes;
    u = un;
    x += h;
  }
  // a zero on the right tail: u + (x - x0) u' vanishes for some x > x0 when u u' < 0
  if (u * du < 0) ++nodes;
  return nodes;
}

}  // namespace

TEST(DiscreteSpectrum, PositiveWellHasNone) {
  EXPECT_EQ(discrete_spectrum(CompactPotential(CompactKind::Bump, {1.0}, 1.0)).count(), 0);
}

TEST(DiscreteSpectrum, TruncatedPoschlTeller) {
  auto sp = discrete_spectrum(pt_well());
  ASSERT_EQ(sp.count(), 1);
  const auto& s = sp.states[0];
  EXPECT_NEAR(s.lambda, -1.0, 1e-6);
  EXPECT_EQ(s.index, -1);
  EXPECT_LT(s.norm_error, 1e-8);
  EXPECT_LT(s.residual, 1e-8);
  EXPECT_NEAR(s.dpsi_norm_sq(), 1.0 / 3.0, 1e-6);  // psi = sech(x)/sqrt(2)
  double w = 0;
  for (int i = 0; i < s.grid.size(); ++i) w = std::max(w, std::abs(s.psi[i] * s.dchi[i] - s.dpsi[i] * s.chi[i] - 1));
  EXPECT_LT(w, 1e-10);
}

TEST(DiscreteSpectrum, DeepWellCount) {
  for (double V0 : {20.0, 60.0}) {
    CompactPotential V(CompactKind::SmoothWell, {V0, 3.0}, 3.5);
    auto sp = discrete_spectrum(V);
    double weyl = 0.0;
    const int N = 20000;
    for (int i = 0; i < N; ++i) {
      double x = -3.5 + 7.0 * (i + 0.5) / N;
      weyl += std::sqrt(std::max(-V(x), 0.0)) * 7.0 / N / pi;
    }
    EXPECT_NEAR(sp.count(), weyl, 2.0);
    for (int k = 1; k < sp.count(); ++k) EXPECT_LT(sp.states[k - 1].lambda, sp.states[k].lambda);
    EXPECT_LT(sp.states.back().lambda, 0.0);
  }
}

TEST(DiscreteSpectrum, SturmCountRandomWells) {
  std::mt19937_64 g(23);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 10; ++t) {
    CompactPotential V(CompactKind::PolyBump, {-2 - 18 * U(g), 4 * U(g) - 2, 4 * U(g) - 2}, 1 + U(g));
    EXPECT_EQ(count_below(V, 0.0), zero_energy_nodes(V)) << "trial " << t;
    EXPECT_EQ(discrete_spectrum(V).count(), count_below(V, 0.0));
  }
}

TEST(ResonanceCheck, OddModeOfSmoothedWell) {
  double lo = 1.5, hi = 3.5;
  int klo = count_below(smooth_well(lo), 0.0), khi = count_below(smooth_well(hi), 0.0);
  ASSERT_EQ(khi, klo + 1);
  while (hi - lo > 1e-8) {
    double m = 0.5 * (lo + hi);
    (count_below(smooth_well(m), 0.0) == klo ? lo : hi) = m;
  }
  auto r = resonance_check(smooth_well(0.5 * (lo + hi)));
  EXPECT_TRUE(r.present());
  EXPECT_GT(r.beta_plus, 0.0);
  EXPECT_NEAR(r.beta_plus * r.beta_plus + r.beta_minus * r.beta_minus, 1.0, 1e-12);
  EXPECT_NEAR(r.beta_plus, -r.beta_minus, 1e-6);
  double w = 0;
  for (int i = 0; i < r.grid.size(); ++i)
    w = std::max(w, std::abs(r.psi[i] * r.dcompanion[i] - r.dpsi[i] * r.companion[i] - 1));
  EXPECT_LT(w, 1e-10);
}

TEST(ResonanceCheck, QuarterWellIsAbsent) {
  auto r = resonance_check(smooth_well(pi * pi / 16));
  EXPECT_EQ(r.status, ResonanceStatus::Absent);
  EXPECT_GT(r.residual, 1e-5);
}

TEST(ResonanceCheck, NearlyFreeIsResonant) {
  auto r = resonance_check(CompactPotential(CompactKind::Bump, {1e-12}, 1.0));
  EXPECT_TRUE(r.present());
  EXPECT_NEAR(r.beta_plus, 1 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(r.beta_minus, 1 / std::sqrt(2.0), 1e-9);
}

TEST(SolveH0Shifted, ZeroAndRightInverse) {
  auto sp = discrete_spectrum(pt_well());
  const auto& s = sp.states[0];
  auto V = pt_well();
  RVec zero = RVec::Zero(s.grid.size());
  EXPECT_EQ(solve_H0_shifted(zero, s).u.cwiseAbs().maxCoeff(), 0.0);
  // g odd, psi_0 even: g is orthogonal to psi_0
  RVec f(s.grid.size()), g(s.grid.size());
  for (int i = 0; i < s.grid.size(); ++i) {
    double x = s.grid.x(i), e = std::exp(-x * x);
    g[i] = x * e;
    f[i] = -(4 * x * x * x - 6 * x) * e + (V(x) - s.lambda) * g[i];
  }
  auto u = solve_H0_shifted(f, s);
  EXPECT_LT((u.u - g).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveH0Shifted, RejectsKernelComponent) {
  auto sp = discrete_spectrum(pt_well());
  EXPECT_THROW(solve_H0_shifted(sp.states[0].psi, sp.states[0]), SolvabilityViolation);
}

TEST(SolveS, ZeroResidualAndOutsideCondition) {
  auto bump = [](double A) { return CompactPotential(CompactKind::PolyBump, {-A, 0.3}, 2.0); };
  double lo = 4.0, hi = 4.5;
  int klo = count_below(bump(lo), 0.0);
  while (hi - lo > 1e-13) {
    double m = 0.5 * (lo + hi);
    (count_below(bump(m), 0.0) == klo ? lo : hi) = m;
  }
  auto V = bump(0.5 * (lo + hi));
  auto r = resonance_check(V);
  ASSERT_TRUE(r.present());
  const auto& G = r.grid;
  RVec zero = RVec::Zero(G.size());
  EXPECT_EQ(solve_S(zero, r).u.cwiseAbs().maxCoeff(), 0.0);
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int t = 0; t < 10; ++t) {
    double c1 = U(gen), c2 = U(gen), c3 = U(gen);
    auto env = [&](double x) {
      double y = x / 2.0;
      return std::abs(y) < 1 ? std::exp(-1 / (1 - y * y)) : 0.0;
    };
    RVec h1 = G.sample([&](double x) { return env(x) * (c1 + c2 * x + c3 * x * x); });
    RVec h2 = G.sample([&](double x) { return env(x) * (1 + 0.5 * x); });
    double k = G.integral(RVec(h1.cwiseProduct(r.psi))) / G.integral(RVec(h2.cwiseProduct(r.psi)));
    RVec f = h1 - k * h2;
    auto u = solve_S(f, r);
    EXPECT_NEAR(r.beta_minus * u.u[G.size() - 1] + r.beta_plus * u.u[0], 0.0, 1e-10);
    RVec d2 = G.derivative(u.du, 1);
    double res = 0;
    for (int i = 5; i < G.size() - 5; ++i) res = std::max(res, std::abs(-d2[i] + V(G.x(i)) * u.u[i] - f[i]));
    EXPECT_LT(res, 1e-8);
  }
}
