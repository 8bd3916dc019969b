#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lacuna/cell_ops.hpp"
#include "lacuna/expansion.hpp"
#include "lacuna/potentials.hpp"

namespace lacuna {

struct UnsupportedLacuna : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecidingCoefficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sign table for the two edges: c_0^{+-} = +-1/(pi n); phi^{+-}' = -phi^{-+}/c_0^{+-}.
double c0(Side s, int n);

// int V = 0 is declared when |int V| < 1e-10 ||V||_1.
bool integral_vanishes(const CompactPotential& V);

// Closed forms, returned as (+, -), with mu = +-sqrt(a_n^2 + b_n^2) the signed edge offset:
//   tau_2 = -mu int V / (4 pi^2 n^2)
//   tau_4 = -(mu / (32 pi^4 n^4)) [2 int V^2 - mu int W^2],  W(x) = int sgn(x - t) V(t) dt,
// the latter only when int V = 0.
std::pair<double, double> tau2(const CompactPotential& V, const PeriodicPotential& a, int n);
std::pair<double, double> tau4(const CompactPotential& V, const PeriodicPotential& a, int n);

struct FiniteLacunaOptions {
  int grid_points = 4097;        // slow grid on [-x0, x0]
  double cutoff_fraction = 1.0;  // the exponential weight is |x| beyond this fraction of x0, in (0, 1]
  double tau_tol = 1e-13;        // |tau_i| below this counts as zero in the chain
};

struct EdgeExpansion {
  EigenvalueExpansion series;
  double consistency = 0.0;  // largest residual of the redundant solvability condition
  double kernel_residual = 0.0;
};

// Two-scale construction of the level attached to edge `side` of lacuna n.
// Returns lambda_0 .. lambda_order and tau_2 .. tau_{order+1}.
EdgeExpansion edge_expansion(const CompactPotential& V, const PeriodicPotential& a, int n, Side side, int order,
                             const FiniteLacunaOptions& opt = {});

enum class LevelStatus { Exists, Absent, Undecided };
enum class VerdictReason { IntegralSign, TauChain, OperatorCriterion };
std::string to_string(LevelStatus s);
std::string to_string(VerdictReason r);

struct LacunaVerdict {
  int n = 0;
  LevelStatus lower = LevelStatus::Absent, upper = LevelStatus::Absent;
  VerdictReason lower_reason = VerdictReason::IntegralSign, upper_reason = VerdictReason::IntegralSign;
  std::optional<int> deciding_index_plus, deciding_index_minus;
  std::vector<double> tau_plus, tau_minus;  // index i -> tau_i (entries 0, 1 unused)
  double integral = 0.0;
  std::string note;
  int count() const { return (lower == LevelStatus::Exists) + (upper == LevelStatus::Exists); }
};

LacunaVerdict existence(const CompactPotential& V, const PeriodicPotential& a, int n, int max_tau_order = 6,
                        const FiniteLacunaOptions& opt = {});

// Nystrom discretisation: one Gauss-Legendre panel per period cell, with at least `nodes`
// nodes overall and at least `min_nodes_per_cell` per panel.
struct CriterionOptions {
  int nodes = 200;
  int min_nodes_per_cell = 12;
  double rcond_floor = 1e-13;  // below this the solve is reported as ill-conditioned
};

struct CriterionResult {
  double value = 0.0;          // the quadratic form; negative <=> upper-edge level exists
  double leading = 0.0;        // int phi^2 V (first Neumann term)
  double operator_norm = 0.0;  // spectral radius of eps V T_14 on the grid
  double rcond = 0.0;
  int nodes = 0;
  bool neumann_converges = true;
  std::string diagnostic;
};

CriterionResult operator_criterion_plus(const CompactPotential& V, const PeriodicPotential& a, int n, double eps,
                                        const CriterionOptions& opt = {});

// Truncated level value pi^2 n^2 / eps^2 + sum eps^i lambda_i
double level_value(const EdgeExpansion& e, double eps, int upto = -1);

}  // namespace lacuna
