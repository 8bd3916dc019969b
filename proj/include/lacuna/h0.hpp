#pragma once

// Discrete spectrum and zero-energy resonance of H_0 = -d^2/dx^2 + V.

#include <stdexcept>
#include <string>
#include <vector>

#include "lacuna/potentials.hpp"
#include "lacuna/slow_grid.hpp"

namespace lacuna {

struct SolvabilityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct H0Options {
  double step = 0.01;          // slow grid spacing for sampled bound states
  double tail_efolds = 40.0;   // L = x0 + tail_efolds / kappa
  int max_points = 400001;
  int resonance_points = 4097;  // grid on [-x0, x0] for the resonance solution
  double resonance_tol = 1e-8;  // |psi'(x0)| / |psi|_inf below this: resonance
  double marginal_tol = 1e-5;   // up to this: marginal
  double ode_tol = 1e-14;
};

// psi_0 and the growing companion chi with W(psi_0, chi) = psi_0 chi' - psi_0' chi = 1,
// sampled on [-L, L]; outside [-x0, x0] both are exact exponentials.
struct BoundState {
  int index = -1;  // -K .. -1, -1 the highest
  double lambda = 0.0;
  double kappa = 0.0;  // sqrt(-lambda)
  double x0 = 0.0, half_length = 0.0;
  SlowGrid grid;
  RVec psi, dpsi, chi, dchi;
  double norm_error = 0.0;  // | ||psi||_2 - 1 | including the analytic tails
  double residual = 0.0;    // max |-psi'' + (V - lambda) psi| on the grid
  double dpsi_norm_sq() const;  // ||psi_0'||^2
};

struct SpectrumResult {
  std::vector<BoundState> states;  // ascending in lambda
  int count() const { return static_cast<int>(states.size()); }
};

// Number of eigenvalues of H_0 below lam (lam <= 0), by Pruefer-angle node counting.
int count_below(const CompactPotential& V, double lam, const H0Options& opt = {});

SpectrumResult discrete_spectrum(const CompactPotential& V, const H0Options& opt = {});

enum class ResonanceStatus { Absent, Present, Marginal };
std::string to_string(ResonanceStatus s);

// Solution of -psi'' + V psi = 0 started at -x0 with (1, 0), rescaled so beta_+^2 + beta_-^2 = 1
// and beta_+ > 0. The companion psi~ has W(psi, psi~) = 1 and psi~(-x0) = 0.
struct ResonanceData {
  ResonanceStatus status = ResonanceStatus::Absent;
  bool present() const { return status != ResonanceStatus::Absent; }
  double residual = 0.0;  // |psi'(x0)| / |psi|_inf
  double beta_plus = 0.0, beta_minus = 0.0;
  double x0 = 0.0;
  SlowGrid grid;  // [-x0, x0]
  RVec psi, dpsi, companion, dcompanion;
  double dpsi_norm_sq() const;
};

ResonanceData resonance_check(const CompactPotential& V, const H0Options& opt = {});

// u and its exact derivative on the solver's grid.
struct SlowSolution {
  RVec u, du;
};

// (-d^2 + V - lambda_0) u = f with u orthogonal to psi_0 (f sampled on state.grid).
SlowSolution solve_H0_shifted(const RVec& f, const BoundState& state, double tol = 1e-8);

// -u'' + V u = f for f supported in [-x0, x0] with int f psi_0 = 0; u is constant outside
// [-x0, x0] and satisfies beta_- u(x0) + beta_+ u(-x0) = 0.
SlowSolution solve_S(const RVec& f, const ResonanceData& res, double tol = 1e-8);

}  // namespace lacuna
