#pragma once

// Uniform grid on [lo, hi] for the slow variable, with 8th-order finite differences,
// high-order cumulative integration and the sign-kernel solve of 2u' = f.

#include <Eigen/Dense>
#include <vector>

namespace lacuna {

using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

// Finite-difference weights (Fornberg) for derivatives 0..m at z from nodes x.
std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m);

class SlowGrid {
 public:
  SlowGrid() = default;
  SlowGrid(double lo, double hi, int points);

  int size() const { return n_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return h_; }
  double x(int i) const { return lo_ + h_ * i; }
  const RVec& nodes() const { return x_; }

  template <class Vec>
  Vec derivative(const Vec& f, int order = 1) const;
  // F(x_i) = int_lo^{x_i} f
  template <class Vec>
  Vec cumulative(const Vec& f) const;
  template <class Scalar>
  Scalar integral(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f) const;
  // u = (1/4) int sgn(x - t) f(t) dt, the solution of 2u' = f with u(lo) + u(hi) = 0
  template <class Vec>
  Vec sign_solve(const Vec& f) const;
  // W(x) = int sgn(x - t) f(t) dt
  template <class Vec>
  Vec sign_convolution(const Vec& f) const;

  template <class F>
  RVec sample(F f) const {
    RVec v(n_);
    for (int i = 0; i < n_; ++i) v[i] = f(x(i));
    return v;
  }

 private:
  static constexpr int kStencil = 9;  // 8th-order first derivative
  int n_ = 0;
  double lo_ = 0, hi_ = 0, h_ = 0;
  RVec x_;
  // d1_[r], d2_[r]: weights for a point whose stencil starts r nodes to its left (r in 0..8)
  std::vector<std::vector<double>> d1_, d2_;
  // interval weights: integral over [x_i, x_{i+1}] from the 8 nodes starting at offset q
  std::vector<std::vector<double>> iw_;
};

}  // namespace lacuna

#include "lacuna/slow_grid_impl.hpp"
