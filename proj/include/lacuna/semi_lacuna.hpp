#pragma once

// Eigenvalues of H_eps below mu_0^+(eps^2): continuations of the bound states of H_0 and the
// level born from a zero-energy resonance.

#include <string>

#include "lacuna/expansion.hpp"
#include "lacuna/h0.hpp"
#include "lacuna/potentials.hpp"

namespace lacuna {

struct SemiLacunaOptions {
  int max_bound_order = 6;
  int max_resonance_order = 8;
  double cutoff_fraction = 1.0;  // resonance weight e^{-tau g}: g = |x| beyond this fraction of x0, in (0, 1]
};

struct SemiExpansion {
  EigenvalueExpansion series;
  double mean_residual = 0.0;  // largest mean part left in a cell right-hand side, relative
  double orthogonality = 0.0;  // bound states: largest |(u_{i,0}, psi_0)|
  double consistency = 0.0;    // resonance: largest mismatch of the two outside conditions
};

// lambda_0 + sum_{i >= 2} eps^i lambda_i for the bound state `state`; returns lambda_0 .. lambda_order
// with lambda_0 = lambda_1 = 0 and base = lambda_0.
SemiExpansion bound_state_expansion(const CompactPotential& V, const PeriodicPotential& a, const BoundState& state,
                                    int order = 4, const SemiLacunaOptions& opt = {});

// sum_i eps^i lambda_i and the decay rate sum_i eps^i tau_i of the resonance level; entries up to
// lambda_order and tau_order. tau_2 and tau_3 are computed from their solvability integrals and
// come out zero.
SemiExpansion resonance_expansion(const CompactPotential& V, const PeriodicPotential& a, const ResonanceData& res,
                                  int order = 8, const SemiLacunaOptions& opt = {});

// int |L_0[a]|^2 = sum_k (c_k^2 + s_k^2) / (32 pi^4 k^4) in the stored amplitudes, and the closed
// form tau_4 = 4 ||psi_0'||^2 int |L_0[a]|^2.
double l0_norm_sq(const PeriodicPotential& a);
double tau4_resonance(const PeriodicPotential& a, const ResonanceData& res);

struct SemiLacunaCount {
  int bound_states = 0;
  bool has_resonance_level = false;
  ResonanceStatus resonance = ResonanceStatus::Absent;
  int count = 0;
  std::string warning;
};

SemiLacunaCount count_semi_lacuna(const CompactPotential& V, const PeriodicPotential& a, const H0Options& opt = {});

}  // namespace lacuna
