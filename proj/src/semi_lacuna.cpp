#include "lacuna/semi_lacuna.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace lacuna {

namespace {
constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// A function of (x, xi) as periodic modes e^{i pi m xi}, m = -M, -M+2, ..., M (rows), on the
// nodes of a slow grid (columns). Row m = 0 is the mean over the cell.
class MeanField {
 public:
  MeanField(const SlowGrid& grid, const CompactPotential& V, const PeriodicPotential& a, int stages)
      : grid_(grid) {
    const int K = std::max(1, a.max_harmonic());
    M_ = K * (stages + 2);
    if (M_ % 2) ++M_;
    rows_ = M_ + 1;
    cols_ = grid_.size();
    for (int k = 1; k <= K; ++k) {
      double c = k <= static_cast<int>(a.cos_coeffs().size()) ? a.cos_coeffs()[k - 1] : 0.0;
      double s = k <= static_cast<int>(a.sin_coeffs().size()) ? a.sin_coeffs()[k - 1] : 0.0;
      if (c == 0.0 && s == 0.0) continue;
      a_modes_.push_back({2 * k, cplx(c, -s) / 2.0});
      a_modes_.push_back({-2 * k, cplx(c, s) / 2.0});
    }
    Vx_ = grid_.sample([&](double x) { return V(x); });
  }

  int idx(int m) const { return (m + M_) / 2; }
  int mode(int r) const { return 2 * r - M_; }
  int mean_row() const { return idx(0); }
  CMat zero() const { return CMat::Zero(rows_, cols_); }

  CMat mean_field(const RVec& u) const {
    CMat F = zero();
    F.row(mean_row()) = u.transpose().cast<cplx>();
    return F;
  }
  RVec mean(const CMat& F) const { return F.row(mean_row()).real().transpose(); }

  CMat dxi(const CMat& F) const {
    CMat G = F;
    for (int r = 0; r < rows_; ++r) G.row(r) *= cplx(0, kPi * mode(r));
    return G;
  }
  CMat dx(const CMat& F) const {
    CMat G = zero();
    for (int r = 0; r < rows_; ++r) {
      if (F.row(r).cwiseAbs().maxCoeff() == 0.0) continue;
      CVec row = F.row(r).transpose();
      G.row(r) = grid_.derivative(row, 1).transpose();
    }
    return G;
  }
  CMat times_a(const CMat& F) const {
    CMat G = zero();
    for (const auto& [m, c] : a_modes_)
      for (int r = 0; r < rows_; ++r) {
        int t = mode(r) + m;
        if (std::abs(t) > M_) continue;
        G.row(idx(t)) += c * F.row(r);
      }
    return G;
  }
  CMat times_x(const CMat& F, const RVec& f) const {
    CMat G = F;
    for (int i = 0; i < cols_; ++i) G.col(i) *= f[i];
    return G;
  }
  // -d^2/dxi^2 u = R on the zero-mean modes; returns |mean of R| / |R|
  double invert_L0(const CMat& R, CMat& out) const {
    out = zero();
    for (int r = 0; r < rows_; ++r) {
      int m = mode(r);
      if (m == 0) continue;
      out.row(r) = R.row(r) / (kPi * kPi * double(m) * m);
    }
    double top = R.cwiseAbs().maxCoeff();
    return top > 0 ? R.row(mean_row()).cwiseAbs().maxCoeff() / top : 0.0;
  }

  const SlowGrid& grid() const { return grid_; }
  const RVec& V() const { return Vx_; }

 private:
  SlowGrid grid_;
  int M_ = 0, rows_ = 0, cols_ = 0;
  std::vector<std::pair<int, cplx>> a_modes_;
  RVec Vx_;
};

void check_order(int order, int cap, const char* what) {
  if (order < 0) throw std::invalid_argument(std::string(what) + ": order must be >= 0");
  if (order > cap) throw std::invalid_argument(std::string(what) + ": order exceeds the configured maximum");
}

}  // namespace

SemiExpansion bound_state_expansion(const CompactPotential& V, const PeriodicPotential& a, const BoundState& state,
                                    int order, const SemiLacunaOptions& opt) {
  check_order(order, opt.max_bound_order, "bound_state_expansion");
  const int last = order + 2;  // stage k fixes lambda_{k-2} and u_{k-2,0}
  MeanField F(state.grid, V, a, last);
  const SlowGrid& G = F.grid();

  // lam[0] carries lambda_0 inside the recurrence
  std::vector<double> lam(last + 1, 0.0);
  lam[0] = state.lambda;
  std::vector<CMat> psi(last + 1, F.zero()), dpsi(last + 1, F.zero());
  psi[0] = F.mean_field(state.psi);
  dpsi[0] = F.mean_field(state.dpsi);

  auto rhs = [&](int k) {
    CMat R = 2.0 * F.dxi(dpsi[k - 1]);
    R += F.dx(dpsi[k - 2]) - F.times_a(psi[k - 2]) - F.times_x(psi[k - 2], F.V());
    for (int j = 0; j <= k - 2; ++j) R += lam[j] * psi[k - 2 - j];
    return R;
  };

  SemiExpansion out;
  psi[1] = F.zero();  // -d^2/dxi^2 psi_1 = 2 dx dxi psi_0 = 0
  for (int k = 2; k <= last; ++k) {
    if (k >= 3) {
      // mean of R_k: u'' - (V - lambda_0) u + f0 + lambda_{k-2} psi_0 with u = u_{k-2,0}
      RVec f0 = F.mean(rhs(k));
      lam[k - 2] = -G.integral(RVec(f0.cwiseProduct(state.psi)));
      RVec f = f0 + lam[k - 2] * state.psi;
      SlowSolution u = solve_H0_shifted(f, state, 1e-6);
      out.orthogonality = std::max(out.orthogonality, std::abs(G.integral(RVec(u.u.cwiseProduct(state.psi)))));
      psi[k - 2] += F.mean_field(u.u);
      dpsi[k - 2] += F.mean_field(u.du);
    }
    CMat tilde;
    out.mean_residual = std::max(out.mean_residual, F.invert_L0(rhs(k), tilde));
    psi[k] = tilde;
    dpsi[k] = F.dx(tilde);
  }

  EigenvalueExpansion& e = out.series;
  e.kind = ExpansionKind::BoundState;
  e.n = state.index;
  e.base = state.lambda;
  e.order = order;
  e.lambda.assign(lam.begin(), lam.begin() + order + 1);
  e.lambda[0] = 0.0;
  return out;
}

SemiExpansion resonance_expansion(const CompactPotential& V, const PeriodicPotential& a, const ResonanceData& res,
                                  int order, const SemiLacunaOptions& opt) {
  if (!res.present()) throw std::invalid_argument("resonance_expansion: H_0 has no zero-energy resonance");
  check_order(order, opt.max_resonance_order, "resonance_expansion");
  if (!(opt.cutoff_fraction > 0.0 && opt.cutoff_fraction <= 1.0))
    throw std::invalid_argument("resonance_expansion: cutoff_fraction must lie in (0, 1]");
  const int last = order + 2;
  MeanField F(res.grid, V, a, last);
  const SlowGrid& G = F.grid();
  const int N = G.size();

  // the eigenfunction is e^{-tau_eps g(x)} sum eps^k psi_k, with g = |x| outside [-w, w]
  const double w = opt.cutoff_fraction * V.x0();
  const RVec gp = G.sample([&](double x) { return 2.0 * smooth_step((x + w) / (2.0 * w)) - 1.0; });
  const RVec gpp = G.derivative(gp, 1);
  const RVec gp2 = gp.cwiseProduct(gp);

  std::vector<double> lam(last + 1, 0.0), tau(last + 1, 0.0);
  std::vector<CMat> psi(last + 1, F.zero()), dpsi(last + 1, F.zero());
  psi[0] = F.mean_field(res.psi);
  dpsi[0] = F.mean_field(res.dpsi);

  auto tsq = [&](int m) {
    double s = 0;
    for (int j = 2; j <= m - 2; ++j) s += tau[j] * tau[m - j];
    return s;
  };
  auto rhs = [&](int k) {
    CMat R = 2.0 * F.dxi(dpsi[k - 1]);
    R += F.dx(dpsi[k - 2]) - F.times_a(psi[k - 2]) - F.times_x(psi[k - 2], F.V());
    for (int j = 0; j <= k - 2; ++j) R += lam[j] * psi[k - 2 - j];
    CMat t4 = F.zero(), t5 = F.zero(), t6 = F.zero(), t7 = F.zero();
    for (int j = 2; j <= k - 1; ++j) t4 += tau[j] * F.dxi(psi[k - 1 - j]);
    for (int j = 2; j <= k - 2; ++j) {
      t5 += tau[j] * dpsi[k - 2 - j];
      t6 += tau[j] * psi[k - 2 - j];
    }
    for (int m = 4; m <= k - 2; ++m) t7 += tsq(m) * psi[k - 2 - m];
    R -= 2.0 * F.times_x(t4 + t5, gp);
    R -= F.times_x(t6, gpp);
    R += F.times_x(t7, gp2);
    return R;
  };

  // int psi_0 (2 g' psi_0' + g'' psi_0) = [g' psi_0^2] = beta_+^2 + beta_-^2
  const double weight = G.integral(RVec(res.psi.cwiseProduct(2.0 * gp.cwiseProduct(res.dpsi) + gpp.cwiseProduct(res.psi))));
  const double bp = res.beta_plus, bm = res.beta_minus;

  SemiExpansion out;
  for (int k = 2; k <= last; ++k) {
    if (k >= 3) {
      // mean of R_k: u'' - V u + f0 + lambda_{k-2} psi_0 - tau_{k-2} (2 g' psi_0' + g'' psi_0)
      RVec f0 = F.mean(rhs(k));
      const double fp = f0[N - 1], fm = f0[0];
      // f must vanish outside: f0(+-x0) + lambda beta_+- = 0 (one condition is redundant)
      lam[k - 2] = -(bp * fp + bm * fm) / (bp * bp + bm * bm);
      out.consistency = std::max(out.consistency, std::abs(bm * fp - bp * fm));
      RVec f = f0 + lam[k - 2] * res.psi;
      if (k - 2 >= 2) {
        tau[k - 2] = G.integral(RVec(f.cwiseProduct(res.psi))) / weight;
        f -= tau[k - 2] * (2.0 * gp.cwiseProduct(res.dpsi) + gpp.cwiseProduct(res.psi));
      }
      f[0] = f[N - 1] = 0.0;
      SlowSolution u = solve_S(f, res, 1e-6);
      psi[k - 2] += F.mean_field(u.u);
      dpsi[k - 2] += F.mean_field(u.du);
    }
    CMat tilde;
    out.mean_residual = std::max(out.mean_residual, F.invert_L0(rhs(k), tilde));
    psi[k] = tilde;
    dpsi[k] = F.dx(tilde);
  }

  EigenvalueExpansion& e = out.series;
  e.kind = ExpansionKind::Resonance;
  e.n = 0;
  e.base = 0.0;
  e.order = order;
  e.lambda.assign(lam.begin(), lam.begin() + order + 1);
  e.tau.assign(tau.begin(), tau.begin() + order + 1);
  return out;
}

double l0_norm_sq(const PeriodicPotential& a) {
  double s = 0.0;
  for (int k = 1; k <= a.max_harmonic(); ++k) {
    auto [ak, bk] = fourier_pair(a, k);
    s += 4.0 * (ak * ak + bk * bk) / (32.0 * std::pow(kPi * k, 4));
  }
  return s;
}

double tau4_resonance(const PeriodicPotential& a, const ResonanceData& res) {
  return 4.0 * res.dpsi_norm_sq() * l0_norm_sq(a);
}

SemiLacunaCount count_semi_lacuna(const CompactPotential& V, const PeriodicPotential& a, const H0Options& opt) {
  (void)a;  // the count does not depend on the periodic background
  SemiLacunaCount c;
  c.bound_states = count_below(V, 0.0, opt);
  ResonanceData r = resonance_check(V, opt);
  c.resonance = r.status;
  c.has_resonance_level = r.status == ResonanceStatus::Present;
  if (r.status == ResonanceStatus::Marginal)
    c.warning = "marginal resonance: |psi'(x0)| / |psi| = " + std::to_string(r.residual);
  c.count = c.bound_states + (c.has_resonance_level ? 1 : 0);
  return c;
}

}  // namespace lacuna
