#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lacuna/ode.hpp"
#include "lacuna/potentials.hpp"

namespace lacuna {

using cplx = std::complex<double>;

// Spectral parameter written as lambda = pi^2 n^2 / eps^2 + nu, so that values near a band
// edge keep full relative precision in nu.
struct Energy {
  int n = 0;
  double nu = 0.0;
  double lambda(double eps) const;
  static Energy from_lambda(double lambda, double eps);
};

struct MonodromyData {
  double eps = 0.0;
  Energy energy;
  double lambda = 0.0;
  double phi1 = 0, dphi1 = 0, phi2 = 0, dphi2 = 0;  // phi_1(1), phi_1'(1), phi_2(1), phi_2'(1)
  double D = 0.0;
  double edge_dev = 0.0;  // D - 2(-1)^n, computed without cancellation
  // deviations phi_1(1) - (-1)^n and phi_2'(1) - (-1)^n
  double dev11 = 0.0, dev22 = 0.0;
  double wronskian() const { return phi1 * dphi2 - dphi1 * phi2; }
  int edge_sign() const { return (energy.n % 2 == 0) ? 1 : -1; }
};

OdeOptions cell_ode_options(double M);

// -phi'' + eps^2 (a(xi) - lambda) phi = 0 on [0, 1] from (1, 0) and (0, 1).
MonodromyData monodromy(const PeriodicPotential& a, double eps, double lambda);
MonodromyData monodromy(const PeriodicPotential& a, double eps, Energy e);

struct Multipliers {
  cplx kappa, kappa_inv;  // |kappa| >= 1 in a lacuna
  bool in_gap = false;
};

Multipliers multipliers(double D);
Multipliers multipliers(const MonodromyData& m);

enum class Direction { DecayRight, DecayLeft };

struct BlochSolution {
  Direction direction = Direction::DecayRight;
  cplx kappa;           // Theta(xi + 1) = kappa * Theta(xi)
  cplx log_multiplier;  // log kappa
  double u0 = 0.0, du0 = 0.0;  // (Theta(0), Theta'(0)), unit length
};

struct NoDecayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Theta+ decays to the right (kappa^{-1} per cell), Theta- decays to the left.
std::pair<BlochSolution, BlochSolution> bloch_solutions(const MonodromyData& m, double edge_tol = 1e-12);
std::pair<BlochSolution, BlochSolution> bloch_solutions(const PeriodicPotential& a, double eps, double lambda);

// W(Theta+, Theta-) evaluated from the data at xi = 0.
double bloch_wronskian(const BlochSolution& p, const BlochSolution& m);

// Periodic factor Theta(xi) / kappa^{xi} sampled on [0, 1] (for the invariance check).
std::vector<double> periodic_factor_samples(const PeriodicPotential& a, double eps, Energy e,
                                            const BlochSolution& b, int samples);

// Fundamental matrix Y(r) = [[phi1, phi2], [phi1', phi2']] at sorted points r in [0, 1].
std::vector<Mat2> cell_fundamental(const PeriodicPotential& a, double eps, Energy e, const std::vector<double>& r);

struct EdgeResult {
  Energy lower, upper;  // mu_n^-, mu_n^+ (for n = 0 only `upper` = mu_0^+ is set)
  bool degenerate = false;
  std::string note;
  double lower_lambda(double eps) const { return lower.lambda(eps); }
  double upper_lambda(double eps) const { return upper.lambda(eps); }
};

EdgeResult band_edges_numeric(const PeriodicPotential& a, double eps, int n);

}  // namespace lacuna
