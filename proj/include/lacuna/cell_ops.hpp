#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lacuna/fourier.hpp"
#include "lacuna/potentials.hpp"

namespace lacuna {

struct SolvabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kernel components below this (relative to the input norm) are dropped silently.
constexpr double kSolvabilityTol = 1e-9;

// -u'' = f, periodic, zero mean.
CellFunction apply_L0(const CellFunction& f);
// -(u'' + pi^2 n^2 u) = f with the parity of n, u orthogonal to the kernel.
CellFunction apply_Ln(const CellFunction& f, int n);

enum class Side { Plus, Minus };
inline int sign_of(Side s) { return s == Side::Plus ? 1 : -1; }
inline Side other(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }
inline const char* to_string(Side s) { return s == Side::Plus ? "+" : "-"; }

struct BandEdgeSeries {
  int n = 0;
  Side sign = Side::Plus;
  double principal_term = 0.0;  // pi^2 n^2, coefficient of 1/t
  int first_index = 0;          // 1 for n = 0, else 0
  std::vector<double> coeffs;   // mu_{n,first_index}, mu_{n,first_index+1}, ...
  std::vector<CellFunction> phi;  // phi_{n,0}, phi_{n,1}, ... (eigenfunction coefficients)
  int order() const { return first_index + static_cast<int>(coeffs.size()) - 1; }
  double coeff(int i) const;  // mu_{n,i}, zero below first_index
  // mu(t) / t scaled back: value of the edge in energy units at eps, truncated at `order`
  double edge_value(double eps, int order) const;
  double edge_offset(double eps, int order) const;  // edge minus pi^2 n^2 / eps^2
};

BandEdgeSeries edge_series_zero(const PeriodicPotential& a, int order, int max_mode = 2 * kDefaultHarmonics);

struct LacunaClass {
  int n = 0;
  bool collapsed = false;
  int N = 0;
  double alpha = 0.0;
  // M[i] = {M^{++}, M^{+-}, M^{-+}, M^{--}} for i = 1..depth reached
  std::vector<std::array<double, 4>> M;
  std::vector<CellFunction> Phi_plus, Phi_minus;  // Phi_{n,0..N-1}
  std::string diagnostic;
};

LacunaClass classify_lacuna(const PeriodicPotential& a, int n, int max_depth = 8,
                            int max_mode = 2 * kDefaultHarmonics + 1);

struct EdgePair {
  LacunaClass lacuna;
  BandEdgeSeries plus, minus;
  // connection constants c_{n,j}^{+-}, j = 0..; c[0] == 0
  std::vector<double> c_plus, c_minus;
  // phi-tilde_{n,i}^{+-}
  std::vector<CellFunction> tilde_plus, tilde_minus;
  const BandEdgeSeries& series(Side s) const { return s == Side::Plus ? plus : minus; }
  const std::vector<CellFunction>& tilde(Side s) const { return s == Side::Plus ? tilde_plus : tilde_minus; }
};

EdgePair edge_series_n(const PeriodicPotential& a, int n, int order, int max_depth = 8,
                       int max_mode = 2 * kDefaultHarmonics + 1);

struct Band {
  int index = 0;       // band between edge n (+) and edge n+1 (-)
  double lower = 0.0;  // mu_n^+
  double upper = 0.0;  // mu_{n+1}^-
  double lower_err = 0.0, upper_err = 0.0;
  bool gap_collapsed_above = false;
  std::string warning;
};

std::vector<Band> essential_spectrum(const PeriodicPotential& a, double eps, int n_max, int order);

}  // namespace lacuna
