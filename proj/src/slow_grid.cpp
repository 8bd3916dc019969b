#include "lacuna/slow_grid.hpp"

#include <stdexcept>

#include "lacuna/quadrature.hpp"

namespace lacuna {

std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
  using LD = long double;
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<LD>> c(n + 1, std::vector<LD>(m + 1, 0.0L));
  LD c1 = 1.0L, c4 = LD(x[0]) - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    LD c2 = 1.0L, c5 = c4;
    c4 = LD(x[i]) - z;
    for (int j = 0; j < i; ++j) {
      LD c3 = LD(x[i]) - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  // transpose to [derivative][node]
  std::vector<std::vector<double>> out(m + 1, std::vector<double>(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= m; ++k) out[k][i] = static_cast<double>(c[i][k]);
  return out;
}

SlowGrid::SlowGrid(double lo, double hi, int points) : n_(points), lo_(lo), hi_(hi) {
  if (points < 16) throw std::invalid_argument("SlowGrid: need at least 16 points");
  if (!(hi > lo)) throw std::invalid_argument("SlowGrid: empty interval");
  h_ = (hi - lo) / (points - 1);
  x_.resize(n_);
  for (int i = 0; i < n_; ++i) x_[i] = x(i);
  std::vector<double> t(kStencil);
  for (int j = 0; j < kStencil; ++j) t[j] = j;
  d1_.resize(kStencil);
  d2_.resize(kStencil);
  for (int r = 0; r < kStencil; ++r) {
    auto w = fornberg_weights(static_cast<double>(r), t, 2);
    d1_[r] = w[1];
    d2_[r] = w[2];
  }
  // exact integrals of the degree-7 Lagrange basis on nodes 0..7 over [q, q+1]
  const auto& gl = gauss_legendre(8);
  iw_.assign(8, std::vector<double>(8, 0.0));
  for (int q = 0; q < 8; ++q) {
    for (size_t g = 0; g < gl.x.size(); ++g) {
      double s = q + 0.5 * (gl.x[g] + 1.0);
      double w = 0.5 * gl.w[g];
      for (int j = 0; j < 8; ++j) {
        double l = 1.0;
        for (int k = 0; k < 8; ++k)
          if (k != j) l *= (s - k) / (j - k);
        iw_[q][j] += w * l;
      }
    }
  }
}

}  // namespace lacuna
