#pragma once

// Template bodies for SlowGrid; included from slow_grid.hpp.

#include <algorithm>
#include <stdexcept>

namespace lacuna {

template <class Vec>
Vec SlowGrid::derivative(const Vec& f, int order) const {
  if (order < 1 || order > 2) throw std::invalid_argument("SlowGrid::derivative: order must be 1 or 2");
  const auto& W = order == 1 ? d1_ : d2_;
  Vec out(n_);
  const double sc = order == 1 ? 1.0 / h_ : 1.0 / (h_ * h_);
  for (int i = 0; i < n_; ++i) {
    int r = std::max(std::min(i, 4), i - (n_ - kStencil));
    int s = i - r;
    // differences against f[i] so constants are annihilated exactly
    typename Vec::Scalar acc(0);
    for (int j = 0; j < kStencil; ++j) acc += W[r][j] * (f[s + j] - f[i]);
    out[i] = acc * sc;
  }
  return out;
}

template <class Vec>
Vec SlowGrid::cumulative(const Vec& f) const {
  Vec F(n_);
  F[0] = 0;
  for (int i = 0; i + 1 < n_; ++i) {
    int s = std::clamp(i - 3, 0, n_ - 8);
    int q = i - s;
    typename Vec::Scalar acc(0);
    for (int j = 0; j < 8; ++j) acc += iw_[q][j] * f[s + j];
    F[i + 1] = F[i] + acc * h_;
  }
  return F;
}

template <class Scalar>
Scalar SlowGrid::integral(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f) const {
  auto F = cumulative(f);
  return F[n_ - 1];
}

template <class Vec>
Vec SlowGrid::sign_convolution(const Vec& f) const {
  Vec F = cumulative(f);
  auto total = F[n_ - 1];
  Vec W(n_);
  for (int i = 0; i < n_; ++i) W[i] = 2.0 * F[i] - total;
  return W;
}

template <class Vec>
Vec SlowGrid::sign_solve(const Vec& f) const {
  return 0.25 * sign_convolution(f);
}

}  // namespace lacuna
