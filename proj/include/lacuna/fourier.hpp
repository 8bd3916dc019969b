#pragma once

#include <complex>
#include <vector>

namespace lacuna {

using cplx = std::complex<double>;

enum class Parity { Periodic, Antiperiodic };

inline Parity parity_of_band(int n) { return (n % 2 == 0) ? Parity::Periodic : Parity::Antiperiodic; }
Parity product_parity(Parity p, Parity q);

constexpr int kDefaultHarmonics = 64;

// Real function on [0,1] with u(1) = +-u(0), stored as coefficients c_m of exp(i pi m xi)
// with |m| <= max_mode; m even for periodic, odd for antiperiodic; c_{-m} = conj(c_m).
class CellFunction {
 public:
  explicit CellFunction(Parity p = Parity::Periodic, int max_mode = 2 * kDefaultHarmonics + 1);

  Parity parity() const { return parity_; }
  int max_mode() const { return max_mode_; }
  bool admits(int m) const;

  cplx coeff(int m) const;
  void set(int m, cplx v);  // also sets the conjugate partner
  void add(int m, cplx v);

  double operator()(double xi) const;
  double derivative(double xi, int order = 1) const;

  double mean() const;                                     // c_0 for periodic, 0 otherwise
  double norm_sq() const;                                  // int_0^1 u^2
  double coeff_norm() const;                               // sqrt(sum |c_m|^2)
  double max_abs_coeff() const;
  CellFunction derivative_fn(int order = 1) const;

  CellFunction& operator+=(const CellFunction& o);
  CellFunction& operator-=(const CellFunction& o);
  CellFunction& operator*=(double s);
  friend CellFunction operator+(CellFunction a, const CellFunction& b) { return a += b; }
  friend CellFunction operator-(CellFunction a, const CellFunction& b) { return a -= b; }
  friend CellFunction operator*(CellFunction a, double s) { return a *= s; }
  friend CellFunction operator*(double s, CellFunction a) { return a *= s; }

  // Pointwise product, truncated to the larger of the two cutoffs.
  friend CellFunction operator*(const CellFunction& a, const CellFunction& b);

  const std::vector<cplx>& raw() const { return c_; }
  std::vector<cplx>& raw() { return c_; }

  static CellFunction constant(double v, int max_mode = 2 * kDefaultHarmonics + 1);
  // sqrt(2) cos(pi n xi + alpha) and sqrt(2) sin(pi n xi + alpha)
  static CellFunction cos_mode(int n, double alpha = 0.0, int max_mode = 2 * kDefaultHarmonics + 1);
  static CellFunction sin_mode(int n, double alpha = 0.0, int max_mode = 2 * kDefaultHarmonics + 1);

 private:
  Parity parity_;
  int max_mode_;
  std::vector<cplx> c_;  // index m + max_mode_
};

// int_0^1 f g d xi for functions of equal parity.
double inner(const CellFunction& f, const CellFunction& g);

// Largest fraction of coefficient norm dropped by any truncated product so far.
double truncation_tail_fraction();
void reset_truncation_monitor();

}  // namespace lacuna
