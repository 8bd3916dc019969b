#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lacuna {

class CellFunction;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a(xi) = sum_k (cos[k-1] cos 2 pi k xi + sin[k-1] sin 2 pi k xi), zero mean.
// The half-amplitudes a_k = cos[k-1]/2 and b_k = sin[k-1]/2 are what the
// asymptotic formulas call the Fourier pair.
class PeriodicPotential {
 public:
  PeriodicPotential() = default;
  PeriodicPotential(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static PeriodicPotential cosine(double amplitude = 1.0, int k = 1);
  static PeriodicPotential sine(double amplitude = 1.0, int k = 1);

  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  int max_harmonic() const { return static_cast<int>(std::max(cos_.size(), sin_.size())); }

  double operator()(double xi) const;
  double derivative(double xi) const;
  double l2_norm_sq() const;  // integral of a^2 over one period

  PeriodicPotential scaled(double s) const;
  CellFunction to_cell(int max_mode) const;

 private:
  std::vector<double> cos_, sin_;
};

// Returns (a_n, b_n) = (int a cos 2 pi n xi, int a sin 2 pi n xi); (0, 0) past the stored range.
std::pair<double, double> fourier_pair(const PeriodicPotential& a, int n);

// Splits raw coefficients into a zero-mean potential and the mean that was removed.
std::pair<PeriodicPotential, double> normalize_zero_mean(double c0, std::vector<double> cos_coeffs,
                                                         std::vector<double> sin_coeffs);

enum class CompactKind { Bump, PoschlTeller, PolyBump, GaussBump, SmoothWell, Tabulated };

std::string to_string(CompactKind k);
CompactKind compact_kind_from_string(const std::string& s);

// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);

// V(x), smooth and vanishing for |x| >= x0.
//   Bump        params {A}: A exp(-1/(1 - (x/x0)^2))
//   PoschlTeller params {A, alpha, w}: -A sech^2(alpha x) times a smooth cutoff of width w
//   PolyBump    params {p0, p1, ...}: (sum p_k (x/x0)^k) exp(-1/(1 - (x/x0)^2))
//   GaussBump   params {A, s, c}: A exp(-(x-c)^2 / s^2) exp(-1/(1 - (x/x0)^2))
//   SmoothWell  params {V0, w}: -V0 on |x| <= w, smoothly rising to 0 at |x| = x0
//   Tabulated   params {x_1, v_1, x_2, v_2, ...}: natural cubic spline, zero outside
class CompactPotential {
 public:
  CompactPotential() = default;
  CompactPotential(CompactKind kind, std::vector<double> params, double x0);

  CompactKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double x0() const { return x0_; }

  double operator()(double x) const;
  CompactPotential scaled(double s) const;

  // int V dx, int V^2 dx and int (int sgn(x-t) V(t) dt)^2 dx by composite Gauss-Legendre.
  double integral() const;
  double integral_sq() const;
  double sgn_square_integral() const;
  double l1_norm() const;

 private:
  CompactKind kind_ = CompactKind::Bump;
  std::vector<double> params_;
  double x0_ = 1.0;
  double scale_ = 1.0;
  std::vector<double> tab_x_, tab_y_, tab_m_;
  void build_spline();
};

// Declared x0, after checking that V vanishes on [x0, 2 x0] and is not identically zero.
double support_radius(const CompactPotential& V);

}  // namespace lacuna
