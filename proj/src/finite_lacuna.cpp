#include "lacuna/finite_lacuna.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "lacuna/floquet.hpp"
#include "lacuna/quadrature.hpp"
#include "lacuna/slow_grid.hpp"

namespace lacuna {

namespace {
constexpr double kPi = std::numbers::pi;
using CMat = Eigen::MatrixXcd;

// A function of (x, xi): rows are modes e^{i pi m xi}, m = -M, -M+2, ..., M; columns are slow
// grid nodes on [-x0, x0]. Beyond the grid every coefficient is constant in x, so the end
// columns stand for the outside values.
class TwoScale {
 public:
  TwoScale(const CompactPotential& V, const PeriodicPotential& a, int n, Side side, int stages,
           const FiniteLacunaOptions& opt)
      : n_(n), side_(side), grid_(-V.x0(), V.x0(), opt.grid_points) {
    const int K = std::max(1, a.max_harmonic());
    M_ = n + 2 * K * (stages + 3);
    rows_ = M_ + 1;  // modes -M..M with the parity of n
    cols_ = grid_.size();

    // periodic background as a mode list
    for (int k = 1; k <= K; ++k) {
      double c = k <= static_cast<int>(a.cos_coeffs().size()) ? a.cos_coeffs()[k - 1] : 0.0;
      double s = k <= static_cast<int>(a.sin_coeffs().size()) ? a.sin_coeffs()[k - 1] : 0.0;
      if (c == 0.0 && s == 0.0) continue;
      a_modes_.push_back({2 * k, cplx(c, -s) / 2.0});
      a_modes_.push_back({-2 * k, cplx(c, s) / 2.0});
    }
    Vx_ = grid_.sample([&](double x) { return V(x); });

    // g' = -1 left of -w, +1 right of w, smooth in between
    const double w = opt.cutoff_fraction * V.x0();
    gp_ = grid_.sample([&](double x) { return 2.0 * smooth_step((x + w) / (2.0 * w)) - 1.0; });
    gpp_ = grid_.derivative(gp_, 1);

    // kernel basis from the edge series (phi^s is the edge eigenfunction, phi^o its partner)
    EdgePair E = edge_series_n(a, n, 1);
    if (E.lacuna.collapsed || E.lacuna.N != 1)
      throw UnsupportedLacuna("finite_lacuna: band " + std::to_string(n) + " needs a lacuna of class N = 1");
    const CellFunction& fs = E.series(side).phi[0];
    const CellFunction& fo = E.series(other(side)).phi[0];
    phi_s_[0] = fs.coeff(n);
    phi_s_[1] = fs.coeff(-n);
    phi_o_[0] = fo.coeff(n);
    phi_o_[1] = fo.coeff(-n);
    norm_s_ = kernel_inner(phi_s_, phi_s_).real();
    norm_o_ = kernel_inner(phi_o_, phi_o_).real();
    // d = (phi^o, d/dxi phi^s) / |phi^o|^2; the derivative multiplies mode m by i pi m
    std::array<cplx, 2> dphi{cplx(0, kPi * n) * phi_s_[0], cplx(0, -kPi * n) * phi_s_[1]};
    d_ = kernel_inner(phi_o_, dphi).real() / norm_o_;
    mu_s_ = E.series(side).coeff(0);
    mu_o_ = E.series(other(side)).coeff(0);
  }

  int idx(int m) const { return (m + M_) / 2; }
  int mode(int r) const { return 2 * r - M_; }
  CMat zero() const { return CMat::Zero(rows_, cols_); }

  CMat kernel_field(const RVec& A, const std::array<cplx, 2>& phi) const {
    CMat F = zero();
    for (int i = 0; i < cols_; ++i) {
      F(idx(n_), i) = A[i] * phi[0];
      F(idx(-n_), i) = A[i] * phi[1];
    }
    return F;
  }
  CMat phi_s_field(const RVec& A) const { return kernel_field(A, phi_s_); }
  CMat phi_o_field(const RVec& B) const { return kernel_field(B, phi_o_); }

  CMat dxi(const CMat& F) const {
    CMat G = F;
    for (int r = 0; r < rows_; ++r) G.row(r) *= cplx(0, kPi * mode(r));
    return G;
  }
  CMat dx(const CMat& F, int order = 1) const {
    CMat G(rows_, cols_);
    for (int r = 0; r < rows_; ++r) {
      CVec row = F.row(r).transpose();
      G.row(r) = grid_.derivative(row, order).transpose();
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

  // kernel projections (phi, F(., x)) / |phi|^2, with (f, g) = sum_m f_m g_{-m}
  RVec project(const CMat& F, const std::array<cplx, 2>& phi, double nrm) const {
    RVec p(cols_);
    for (int i = 0; i < cols_; ++i)
      p[i] = (phi[0] * F(idx(-n_), i) + phi[1] * F(idx(n_), i)).real() / nrm;
    return p;
  }
  RVec proj_s(const CMat& F) const { return project(F, phi_s_, norm_s_); }
  RVec proj_o(const CMat& F) const { return project(F, phi_o_, norm_o_); }

  // L_n^{-1} on non-kernel modes; returns the largest dropped kernel coefficient relative to |R|
  double invert_Ln(const CMat& R, CMat& out) const {
    out = zero();
    for (int r = 0; r < rows_; ++r) {
      int m = mode(r);
      if (std::abs(m) == n_) continue;
      out.row(r) = R.row(r) / (kPi * kPi * (double(m) * m - double(n_) * n_));
    }
    double ker = std::max(R.row(idx(n_)).cwiseAbs().maxCoeff(), R.row(idx(-n_)).cwiseAbs().maxCoeff());
    return ker / std::max(R.cwiseAbs().maxCoeff(), 1e-300);
  }

  const SlowGrid& grid() const { return grid_; }
  const RVec& V() const { return Vx_; }
  const RVec& gp() const { return gp_; }
  const RVec& gpp() const { return gpp_; }
  double d() const { return d_; }
  double mu_s() const { return mu_s_; }
  double mu_o() const { return mu_o_; }
  int cols() const { return cols_; }

 private:
  static cplx kernel_inner(const std::array<cplx, 2>& f, const std::array<cplx, 2>& g) {
    return f[0] * g[1] + f[1] * g[0];
  }

  int n_, M_ = 0, rows_ = 0, cols_ = 0;
  Side side_;
  SlowGrid grid_;
  std::vector<std::pair<int, cplx>> a_modes_;
  RVec Vx_, gp_, gpp_;
  std::array<cplx, 2> phi_s_{}, phi_o_{};
  double norm_s_ = 1, norm_o_ = 1, d_ = 0, mu_s_ = 0, mu_o_ = 0;
};

}  // namespace

double c0(Side s, int n) { return sign_of(s) / (kPi * n); }

bool integral_vanishes(const CompactPotential& V) {
  return std::abs(V.integral()) < 1e-10 * std::max(V.l1_norm(), 1e-300);
}

std::pair<double, double> tau2(const CompactPotential& V, const PeriodicPotential& a, int n) {
  EdgePair E = edge_series_n(a, n, 0);
  if (E.lacuna.collapsed || E.lacuna.N != 1)
    throw UnsupportedLacuna("tau2: band " + std::to_string(n) + " needs a lacuna of class N = 1");
  const double mu0 = E.plus.coeff(0);
  const double t = mu0 * V.integral() / (4.0 * kPi * kPi * double(n) * n);
  return {-t, t};
}

EdgeExpansion edge_expansion(const CompactPotential& V, const PeriodicPotential& a, int n, Side side, int order,
                             const FiniteLacunaOptions& opt) {
  if (order < 0) throw std::invalid_argument("edge_expansion: order must be >= 0");
  if (!(opt.cutoff_fraction > 0.0 && opt.cutoff_fraction <= 1.0))
    throw std::invalid_argument("edge_expansion: cutoff_fraction must lie in (0, 1]");
  const int last = order + 2;  // stage k fixes lambda_{k-2}, tau_{k-1}
  TwoScale S(V, a, n, side, last, opt);
  const SlowGrid& G = S.grid();
  const int N = S.cols();
  const double d = S.d();

  std::vector<double> lam(last + 1, 0.0), tau(last + 2, 0.0);
  std::vector<CMat> psi(last + 1, S.zero()), dpsi(last + 1, S.zero());  // dpsi = d/dx psi
  psi[0] = S.phi_s_field(RVec::Ones(N));

  auto tsq = [&](int m) {  // coefficient of eps^m in tau_eps^2
    double s = 0;
    for (int j = 2; j <= m - 2; ++j) s += tau[j] * tau[m - j];
    return s;
  };
  // everything in R_k except 2 dx dxi psi_{k-1}
  auto rest = [&](int k) {
    CMat R = S.zero();
    if (k < 2) return R;
    const CMat& p = psi[k - 2];
    R += S.dx(dpsi[k - 2]);
    R -= S.times_a(p) + S.times_x(p, S.V());
    for (int j = 0; j <= k - 2; ++j) R += lam[j] * psi[k - 2 - j];
    CMat t4 = S.zero(), t5 = S.zero(), t6 = S.zero(), t7 = S.zero();
    for (int j = 2; j <= k - 1; ++j) t4 += tau[j] * S.dxi(psi[k - 1 - j]);
    for (int j = 2; j <= k - 2; ++j) {
      t5 += tau[j] * dpsi[k - 2 - j];
      t6 += tau[j] * psi[k - 2 - j];
    }
    for (int m = 4; m <= k - 2; ++m) t7 += tsq(m) * psi[k - 2 - m];
    R -= 2.0 * S.times_x(t4 + t5, S.gp());
    R -= S.times_x(t6, S.gpp());
    R += S.times_x(t7, S.gp().cwiseProduct(S.gp()));
    return R;
  };

  const double cbeta = S.mu_s() - S.mu_o();
  EdgeExpansion out;
  double kres = 0.0;
  for (int k = 2; k <= last; ++k) {
    CMat R = rest(k);
    RVec Ps = S.proj_s(R), Po = S.proj_o(R);
    const double pl = Ps[N - 1], mi = Ps[0];
    lam[k - 2] = -(pl + mi) / 2.0;
    out.consistency = std::max(out.consistency, std::abs(pl - mi) / 2.0);
    // phi^o part: P^o(+-x0) +- 2 d tau_{k-1} g'(+-x0) + cbeta beta_{k-2} = 0, beta the free constant of B_{k-2}
    const double beta = -(Po[N - 1] + Po[0]) / (2.0 * cbeta);
    if (k - 1 >= 2) tau[k - 1] = (Po[N - 1] - Po[0]) / (4.0 * d);
    psi[k - 2] += S.phi_o_field(RVec::Constant(N, beta));

    R = rest(k);
    Ps = S.proj_s(R);
    Po = S.proj_o(R);
    // kernel amplitudes of psi_{k-1}: 2 d A' = -P^o, 2 d B' = P^s; derivatives kept exact
    const RVec dA = -Po / (2.0 * d), dB = Ps / (2.0 * d);
    psi[k - 1] += S.phi_s_field(G.sign_solve(RVec(-Po / d))) + S.phi_o_field(G.sign_solve(RVec(Ps / d)));
    dpsi[k - 1] += S.phi_s_field(dA) + S.phi_o_field(dB);

    CMat Rk = R + 2.0 * S.dxi(dpsi[k - 1]);
    CMat tilde;
    double kr = S.invert_Ln(Rk, tilde);
    kres = std::max(kres, kr);
    psi[k] = tilde;
    dpsi[k] = S.dx(tilde);
  }

  out.kernel_residual = kres;
  EigenvalueExpansion& e = out.series;
  e.kind = side == Side::Plus ? ExpansionKind::EdgePlus : ExpansionKind::EdgeMinus;
  e.n = n;
  e.order = order;
  e.lambda.assign(lam.begin(), lam.begin() + order + 1);
  e.tau.assign(tau.begin(), tau.begin() + order + 2);
  return out;
}

std::pair<double, double> tau4(const CompactPotential& V, const PeriodicPotential& a, int n) {
  if (!integral_vanishes(V))
    throw DecidingCoefficientError("tau4: int V = " + std::to_string(V.integral()) +
                                   " is nonzero, so tau2 is the deciding coefficient");
  EdgePair E = edge_series_n(a, n, 0);
  if (E.lacuna.collapsed || E.lacuna.N != 1)
    throw UnsupportedLacuna("tau4: band " + std::to_string(n) + " needs a lacuna of class N = 1");
  const double I2 = V.integral_sq(), W2 = V.sgn_square_integral();
  const double p4 = std::pow(kPi * n, 4);
  auto f = [&](double mu) { return -(mu / (32.0 * p4)) * (2.0 * I2 - mu * W2); };
  return {f(E.plus.coeff(0)), f(E.minus.coeff(0))};
}

std::string to_string(LevelStatus s) {
  switch (s) {
    case LevelStatus::Exists: return "exists";
    case LevelStatus::Absent: return "absent";
    case LevelStatus::Undecided: return "undecided_at_order";
  }
  return "unknown";
}

std::string to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::IntegralSign: return "integral_V_sign";
    case VerdictReason::TauChain: return "tau_chain";
    case VerdictReason::OperatorCriterion: return "operator_criterion";
  }
  return "unknown";
}

LacunaVerdict existence(const CompactPotential& V, const PeriodicPotential& a, int n, int max_tau_order,
                        const FiniteLacunaOptions& opt) {
  if (max_tau_order < 2) throw std::invalid_argument("existence: max_tau_order must be >= 2");
  LacunaVerdict v;
  v.n = n;
  v.integral = V.integral();
  // tau_2 .. tau_{max_tau_order} come from an expansion of order max_tau_order - 1
  auto ep = edge_expansion(V, a, n, Side::Plus, max_tau_order - 1, opt);
  auto em = edge_expansion(V, a, n, Side::Minus, max_tau_order - 1, opt);
  v.tau_plus = ep.series.tau;
  v.tau_minus = em.series.tau;
  auto first = [&](const std::vector<double>& t) -> std::optional<int> {
    for (int i = 2; i < static_cast<int>(t.size()); ++i)
      if (std::abs(t[i]) > opt.tau_tol) return i;
    return std::nullopt;
  };
  v.deciding_index_plus = first(v.tau_plus);
  v.deciding_index_minus = first(v.tau_minus);

  if (!integral_vanishes(V)) {
    v.lower = v.integral > 0 ? LevelStatus::Exists : LevelStatus::Absent;
    v.upper = v.integral > 0 ? LevelStatus::Absent : LevelStatus::Exists;
    v.lower_reason = v.upper_reason = VerdictReason::IntegralSign;
    return v;
  }
  // int V = 0: both edges go to the tau chain; the lower edge keeps the closed half-line rule
  // when the chain is exhausted
  if (v.deciding_index_minus) {
    v.lower = v.tau_minus[*v.deciding_index_minus] > 0 ? LevelStatus::Exists : LevelStatus::Absent;
    v.lower_reason = VerdictReason::TauChain;
  } else {
    v.lower = LevelStatus::Exists;
    v.lower_reason = VerdictReason::IntegralSign;
  }
  if (v.deciding_index_plus) {
    v.upper = v.tau_plus[*v.deciding_index_plus] > 0 ? LevelStatus::Exists : LevelStatus::Absent;
    v.upper_reason = VerdictReason::TauChain;
  } else {
    v.upper = LevelStatus::Undecided;
    v.upper_reason = VerdictReason::TauChain;
    std::ostringstream os;
    os << "|tau_i^+| < " << opt.tau_tol << " for i = 2.." << max_tau_order;
    v.note = os.str();
  }
  return v;
}

CriterionResult operator_criterion_plus(const CompactPotential& V, const PeriodicPotential& a, int n, double eps,
                                        const CriterionOptions& opt) {
  if (!(eps > 0.0)) throw std::invalid_argument("operator_criterion_plus: eps must be positive");
  LacunaClass L = classify_lacuna(a, n);
  if (L.collapsed || L.N != 1)
    throw UnsupportedLacuna("operator_criterion_plus: band " + std::to_string(n) + " needs a lacuna of class N = 1");

  const EdgeResult edges = band_edges_numeric(a, eps, n);
  const Energy mu = edges.upper;
  const MonodromyData md = monodromy(a, eps, mu);
  const Eigen::Matrix2d T{{md.phi1, md.phi2}, {md.dphi1, md.dphi2}};

  // periodic Bloch vector: null vector of T - (-1)^n I, from the cancellation-free deviations
  Eigen::Vector2d bv;
  if (std::abs(md.phi2) + std::abs(md.dev11) >= std::abs(md.dphi1) + std::abs(md.dev22))
    bv = {md.phi2, -md.dev11};
  else
    bv = {-md.dev22, md.dphi1};
  bv.normalize();
  const double edge_sign = (n % 2 == 0) ? 1.0 : -1.0;

  // panels: the period cells [j eps, (j+1) eps] clipped to [-x0, x0]
  const double x0 = V.x0();
  std::vector<double> edges_x{-x0};
  for (long j = static_cast<long>(std::floor(-x0 / eps)) + 1; j * eps < x0; ++j)
    if (j * eps > -x0 + 1e-12 * eps && j * eps < x0 - 1e-12 * eps) edges_x.push_back(j * eps);
  edges_x.push_back(x0);
  const int P = static_cast<int>(edges_x.size()) - 1;
  const int q = std::max(opt.min_nodes_per_cell, (opt.nodes + P - 1) / P);
  const GaussRule& gl = gauss_legendre(q);

  struct Pt {
    double t;
    long cell;
    double rho;
  };
  auto locate = [&](double t) {
    double xi = t / eps;
    long m = static_cast<long>(std::floor(xi));
    double r = xi - m;
    if (r >= 1.0) {
      r -= 1.0;
      ++m;
    }
    return Pt{t, m, std::max(0.0, r)};
  };

  const int Nn = P * q;
  std::vector<Pt> node(Nn);
  std::vector<double> w(Nn);
  std::vector<int> panel_of(Nn);
  for (int p = 0; p < P; ++p) {
    const double l = edges_x[p], r = edges_x[p + 1];
    for (int j = 0; j < q; ++j) {
      node[p * q + j] = locate(l + 0.5 * (r - l) * (gl.x[j] + 1.0));
      w[p * q + j] = 0.5 * (r - l) * gl.w[j];
      panel_of[p * q + j] = p;
    }
  }
  // sub-rule points for the panel that contains each target node (the kernel has a kink there)
  std::vector<Pt> sub(static_cast<size_t>(Nn) * 2 * q);
  std::vector<double> sw(sub.size());
  for (int i = 0; i < Nn; ++i) {
    const int p = panel_of[i];
    const double l = edges_x[p], r = edges_x[p + 1], xi = node[i].t;
    for (int half = 0; half < 2; ++half) {
      const double s0 = half == 0 ? l : xi, s1 = half == 0 ? xi : r;
      for (int j = 0; j < q; ++j) {
        size_t at = (static_cast<size_t>(i) * 2 + half) * q + j;
        sub[at] = locate(s0 + 0.5 * (s1 - s0) * (gl.x[j] + 1.0));
        sw[at] = 0.5 * (s1 - s0) * gl.w[j];
      }
    }
  }

  // one pass over the cell for every fractional position needed
  const GaussRule& gn = gauss_legendre(32);
  std::vector<double> rho;
  rho.reserve(Nn + sub.size() + gn.x.size());
  for (const auto& p : node) rho.push_back(p.rho);
  for (const auto& p : sub) rho.push_back(p.rho);
  for (double x : gn.x) rho.push_back(0.5 * (x + 1.0));
  std::vector<size_t> order(rho.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return rho[i] < rho[j]; });
  std::vector<double> sorted(rho.size());
  for (size_t i = 0; i < order.size(); ++i) sorted[i] = rho[order[i]];
  const auto Ys = cell_fundamental(a, eps, mu, sorted);
  std::vector<Eigen::RowVector2d> y(rho.size());
  for (size_t i = 0; i < order.size(); ++i) y[order[i]] = {Ys[i].a, Ys[i].b};

  // (phi_1, phi_2)(rho + m) = (phi_1, phi_2)(rho) T^m, powers cached by cell index
  std::map<long, Eigen::Matrix2d> pow_cache;
  const Eigen::Matrix2d Tinv{{T(1, 1), -T(0, 1)}, {-T(1, 0), T(0, 0)}};
  auto Tpow = [&](long m) -> const Eigen::Matrix2d& {
    auto it = pow_cache.find(m);
    if (it != pow_cache.end()) return it->second;
    Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d& B = m >= 0 ? T : Tinv;
    for (long k = 0; k < std::abs(m); ++k) R = R * B;
    return pow_cache.emplace(m, R).first->second;
  };
  auto fundamental = [&](const Pt& p, size_t slot) -> Eigen::RowVector2d { return y[slot] * Tpow(p.cell); };

  double nrm = 0.0;
  for (size_t j = 0; j < gn.x.size(); ++j) {
    double th = y[Nn + sub.size() + j].dot(bv);
    nrm += 0.5 * gn.w[j] * th * th;
  }
  const double theta_scale = 1.0 / std::sqrt(nrm);

  std::vector<Eigen::RowVector2d> Fn(Nn);
  Eigen::VectorXd theta(Nn), Vn(Nn);
  for (int i = 0; i < Nn; ++i) {
    Fn[i] = fundamental(node[i], i);
    double parity = (n * node[i].cell) % 2 == 0 ? 1.0 : edge_sign;
    theta[i] = theta_scale * parity * y[i].dot(bv);
    Vn[i] = V(node[i].t);
  }
  auto kern = [](const Eigen::RowVector2d& fx, const Eigen::RowVector2d& ft, double sgn) {
    return 0.5 * sgn * (fx[0] * ft[1] - fx[1] * ft[0]);
  };

  // K(i, j) = int K(x_i, t) l_j(t) dt, l_j the Lagrange basis of node j's panel
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(Nn, Nn);
  std::vector<double> lag(q);
  for (int i = 0; i < Nn; ++i) {
    const int pi = panel_of[i];
    for (int j = 0; j < Nn; ++j) {
      if (panel_of[j] == pi) continue;
      double sg = node[i].t > node[j].t ? 1.0 : -1.0;
      K(i, j) = kern(Fn[i], Fn[j], sg) * w[j];
    }
    const double l = edges_x[pi], r = edges_x[pi + 1];
    for (int half = 0; half < 2; ++half) {
      const double sg = half == 0 ? 1.0 : -1.0;
      for (int s = 0; s < q; ++s) {
        size_t at = (static_cast<size_t>(i) * 2 + half) * q + s;
        const Eigen::RowVector2d fs = fundamental(sub[at], Nn + at);
        const double kv = kern(Fn[i], fs, sg) * sw[at];
        // Lagrange basis on the panel's reference nodes
        const double z = 2.0 * (sub[at].t - l) / (r - l) - 1.0;
        for (int j = 0; j < q; ++j) {
          double b = 1.0;
          for (int m = 0; m < q; ++m)
            if (m != j) b *= (z - gl.x[m]) / (gl.x[j] - gl.x[m]);
          lag[j] = b;
        }
        for (int j = 0; j < q; ++j) K(i, pi * q + j) += kv * lag[j];
      }
    }
  }

  Eigen::MatrixXd Aop = eps * Vn.asDiagonal() * K;
  Eigen::MatrixXd Msys = Eigen::MatrixXd::Identity(Nn, Nn) + Aop;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Msys);
  Eigen::VectorXd rhs = Vn.cwiseProduct(theta);
  Eigen::VectorXd u = lu.solve(rhs);

  CriterionResult res;
  res.nodes = Nn;
  res.rcond = lu.rcond();
  Eigen::Map<const Eigen::VectorXd> wv(w.data(), Nn);
  res.value = (wv.cwiseProduct(theta)).dot(u);
  res.leading = (wv.cwiseProduct(theta)).dot(rhs);

  // spectral radius of eps V T_14 by power iteration
  Eigen::VectorXd z = Eigen::VectorXd::Ones(Nn);
  double rho_est = 0.0;
  for (int it = 0; it < 80; ++it) {
    Eigen::VectorXd zn = Aop * z;
    double nz = zn.norm();
    if (nz == 0.0) break;
    rho_est = nz / z.norm();
    z = zn / nz;
  }
  res.operator_norm = rho_est;
  res.neumann_converges = rho_est < 1.0;
  std::ostringstream os;
  if (res.rcond < opt.rcond_floor) os << "Nystrom system ill-conditioned (rcond " << res.rcond << "); ";
  if (!res.neumann_converges) os << "Neumann series for (I + eps V T14)^-1 diverges (radius " << rho_est << ")";
  res.diagnostic = os.str();
  return res;
}

double level_value(const EdgeExpansion& e, double eps, int upto) {
  return e.series.value(eps, upto);
}

}  // namespace lacuna
