#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lacuna/floquet.hpp"
#include "lacuna/potentials.hpp"

namespace lacuna {

struct OracleOptions {
  int extra_cells_cap = 4;      // periodic cells added beyond the support (exact Bloch data makes more pointless)
  double efolds = 35.0;
  double mismatch_tol = 1e-8;   // |W_norm| accepted at a root
  int scan_points = 160;        // uniform samples across the window
  int edge_refinement = 40;     // geometric samples toward each window edge
  double edge_ratio = 0.6;      // geometric ratio of those samples
  double max_step_x = 1.0 / 64; // step cap in units of eps (x-step <= eps/64)
};

struct OracleLevel {
  double lambda = 0.0;
  Energy energy;
  double mismatch = 0.0;  // |W_norm| at the root
  double distance_to_lower = 0.0, distance_to_upper = 0.0;
};

struct OracleResult {
  double eps = 0.0;
  int band = 0;              // 0: semi-infinite lacuna below mu_0^+; n >= 1: gap n
  double window_lo = 0.0, window_hi = 0.0;  // lambda
  Energy edge_lo, edge_hi;   // numeric edges bounding the gap (edge_lo unused for band 0)
  std::vector<OracleLevel> levels;
  double half_length = 0.0;  // L
  int cells = 0;
  bool no_gap = false;
  std::string note;
};

// Normalised Wronskian mismatch of the left/right Bloch-decaying solutions at x = 0.
double shooting_mismatch(const CompactPotential& V, const PeriodicPotential& a, double eps, Energy e,
                         const OracleOptions& opt = {});

// All eigenvalues of -d^2/dx^2 + V + a(x/eps) in the selected lacuna.
OracleResult gap_eigenvalues(const CompactPotential& V, const PeriodicPotential& a, double eps, int band,
                             const OracleOptions& opt = {});

struct OrderFit {
  double order = 0.0, constant = 0.0;
  bool saturated = false;
  std::string note;
};

// Least-squares slope of log(error) against log(eps).
OrderFit fit_convergence_order(const std::vector<std::pair<double, double>>& samples, double floor = 0.0);

}  // namespace lacuna
