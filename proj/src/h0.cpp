#include "lacuna/h0.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lacuna/ode.hpp"

namespace lacuna {

namespace {

OdeOptions ode_options(const H0Options& opt) {
  OdeOptions o;
  o.abs_tol = opt.ode_tol * 0.1;
  o.rel_tol = opt.ode_tol;
  o.max_step = 1.0 / 32;
  return o;
}

// Pruefer angle at x0 of the solution decaying at -infinity, u = r sin(theta), u' = r cos(theta).
double pruefer_end(const CompactPotential& V, double lam, const H0Options& opt) {
  const double kappa = std::sqrt(std::max(-lam, 0.0));
  const double x0 = V.x0();
  std::array<double, 1> th{std::atan2(1.0, kappa)};
  auto sys = [&](const std::array<double, 1>& y, std::array<double, 1>& dy, double x) {
    double s = std::sin(y[0]), c = std::cos(y[0]);
    dy[0] = c * c - (V(x) - lam) * s * s;
  };
  OdeOptions o = ode_options(opt);
  o.rel_tol = std::max(o.rel_tol, 1e-12);
  o.abs_tol = o.rel_tol * 0.1;
  detail::run<double>(sys, th, -x0, x0, o);
  return th[0];
}

// growing-coefficient indicator at x0; vanishes exactly at eigenvalues
double growth(double theta, double kappa) { return kappa * std::sin(theta) + std::cos(theta); }

int nodes_from_angle(double theta, double kappa) {
  int inside = static_cast<int>(std::floor(theta / std::numbers::pi));
  double s = std::sin(theta);
  bool tail = s * growth(theta, kappa) < 0.0;
  return inside + (tail ? 1 : 0);
}

double min_sample(const CompactPotential& V) {
  double m = 0.0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) m = std::min(m, V(-V.x0() + 2.0 * V.x0() * i / n));
  return m;
}

// samples at the given stops (monotone, after s0) of the solution of u'' = (V - lam) u with data y0 at s0
std::vector<Vec2> shoot(const CompactPotential& V, double lam, double s0, Vec2 y0, const std::vector<double>& stops,
                        const H0Options& opt) {
  std::array<double, 2> y{y0.u, y0.du};
  auto sys = [&](const std::array<double, 2>& z, std::array<double, 2>& dz, double x) {
    dz[0] = z[1];
    dz[1] = (V(x) - lam) * z[0];
  };
  const OdeOptions o = ode_options(opt);
  std::vector<Vec2> out;
  out.reserve(stops.size());
  double s = s0;
  for (double t : stops) {
    detail::run<double>(sys, y, s, t, o);
    s = t;
    out.push_back({y[0], y[1]});
  }
  return out;
}

// exact solution of u'' = kappa^2 u continued from (u, u') at the boundary x = b, evaluated at x
Vec2 exp_tail(Vec2 at_b, double kappa, double b, double x) {
  if (kappa == 0.0) return {at_b.u + at_b.du * (x - b), at_b.du};
  double s = x - b;
  double p = 0.5 * (at_b.u + at_b.du / kappa), m = 0.5 * (at_b.u - at_b.du / kappa);
  double ep = std::exp(kappa * s), em = std::exp(-kappa * s);
  return {p * ep + m * em, kappa * (p * ep - m * em)};
}

BoundState build_state(const CompactPotential& V, double lam, int index, const H0Options& opt) {
  BoundState st;
  st.index = index;
  st.lambda = lam;
  st.kappa = std::sqrt(-lam);
  st.x0 = V.x0();
  const double x0 = st.x0, k = st.kappa;
  double L = x0 + opt.tail_efolds / k;
  int half = static_cast<int>(std::ceil(L / opt.step));
  half = std::min(half, (opt.max_points - 1) / 2);
  st.half_length = L;
  st.grid = SlowGrid(-L, L, 2 * half + 1);  // odd, so x = 0 is node `half`
  const SlowGrid& G = st.grid;
  const int N = G.size();

  std::vector<double> left_stops, right_stops;
  std::vector<int> left_idx, right_idx;
  for (int i = 0; i <= half; ++i)
    if (G.x(i) > -x0) left_stops.push_back(i == half ? 0.0 : G.x(i)), left_idx.push_back(i);
  for (int i = N - 1; i >= half; --i)
    if (G.x(i) < x0) right_stops.push_back(i == half ? 0.0 : G.x(i)), right_idx.push_back(i);
  auto ul = shoot(V, lam, -x0, {1.0, k}, left_stops, opt);
  auto ur = shoot(V, lam, x0, {1.0, -k}, right_stops, opt);
  Vec2 l0 = ul.back(), r0 = ur.back();
  const double c = (l0.u * r0.u + l0.du * r0.du) / (r0.u * r0.u + r0.du * r0.du);

  st.psi = RVec::Zero(N);
  st.dpsi = RVec::Zero(N);
  st.chi = RVec::Zero(N);
  st.dchi = RVec::Zero(N);
  for (int i = 0; i < N; ++i) {
    double x = G.x(i);
    if (x <= -x0) {
      double e = std::exp(k * (x + x0));
      st.psi[i] = e;
      st.dpsi[i] = k * e;
    } else if (x >= x0) {
      double e = c * std::exp(-k * (x - x0));
      st.psi[i] = e;
      st.dpsi[i] = -k * e;
    }
  }
  for (size_t j = 0; j < left_idx.size(); ++j) st.psi[left_idx[j]] = ul[j].u, st.dpsi[left_idx[j]] = ul[j].du;
  for (size_t j = 0; j + 1 < right_idx.size(); ++j)
    st.psi[right_idx[j]] = c * ur[j].u, st.dpsi[right_idx[j]] = c * ur[j].du;

  // L2 normalisation; beyond +-L the exponential tails are added analytically
  RVec sq = st.psi.cwiseProduct(st.psi);
  double nrm2 = G.integral(sq) + (sq[0] + sq[N - 1]) / (2.0 * k);
  double s = 1.0 / std::sqrt(nrm2);
  if (st.psi[half] < 0 || (st.psi[half] == 0 && st.dpsi[half] < 0)) s = -s;
  st.psi *= s;
  st.dpsi *= s;
  sq = st.psi.cwiseProduct(st.psi);
  st.norm_error = std::abs(std::sqrt(G.integral(sq) + (sq[0] + sq[N - 1]) / (2.0 * k)) - 1.0);

  // companion with unit Wronskian on each half, started at x = 0 from that half's psi
  auto companion = [&](Vec2 p0, const std::vector<double>& stops, const std::vector<int>& idx, double b, int dir) {
    double r2 = p0.u * p0.u + p0.du * p0.du;
    Vec2 y0{-p0.du / r2, p0.u / r2};
    std::vector<double> st2(stops.rbegin() + 1, stops.rend());  // from 0 outwards, excluding 0
    st2.push_back(b);
    auto v = shoot(V, lam, 0.0, y0, st2, opt);
    st.chi[half] = y0.u;
    st.dchi[half] = y0.du;
    std::vector<int> id2(idx.rbegin() + 1, idx.rend());
    for (size_t j = 0; j < id2.size(); ++j) st.chi[id2[j]] = v[j].u, st.dchi[id2[j]] = v[j].du;
    Vec2 atb = v.back();
    for (int i = 0; i < N; ++i) {
      double x = G.x(i);
      if (dir * x >= dir * b) {
        // continue beyond +-x0 with the free exponentials
        Vec2 t = exp_tail(atb, k, b, x);
        st.chi[i] = t.u;
        st.dchi[i] = t.du;
      }
    }
  };
  Vec2 pl{st.psi[half], st.dpsi[half]};
  double sr = s * c;
  Vec2 pr{sr * r0.u, sr * r0.du};
  companion(pr, right_stops, right_idx, x0, +1);
  companion(pl, left_stops, left_idx, -x0, -1);

  RVec d2 = G.derivative(st.psi, 2);
  double res = 0.0;
  for (int i = 0; i < N; ++i) res = std::max(res, std::abs(-d2[i] + (V(G.x(i)) - lam) * st.psi[i]));
  st.residual = res;
  return st;
}

RVec reverse_cumulative(const SlowGrid& G, const RVec& f) {
  RVec r = f.reverse();
  RVec c = G.cumulative(r);
  return c.reverse();
}

}  // namespace

double BoundState::dpsi_norm_sq() const {
  RVec sq = dpsi.cwiseProduct(dpsi);
  const int N = grid.size();
  return grid.integral(sq) + (sq[0] + sq[N - 1]) / (2.0 * kappa);
}

double ResonanceData::dpsi_norm_sq() const { return grid.integral(RVec(dpsi.cwiseProduct(dpsi))); }

int count_below(const CompactPotential& V, double lam, const H0Options& opt) {
  if (lam > 0) throw std::invalid_argument("count_below: lambda must be <= 0");
  double k = std::sqrt(-lam);
  return nodes_from_angle(pruefer_end(V, lam, opt), k);
}

SpectrumResult discrete_spectrum(const CompactPotential& V, const H0Options& opt) {
  SpectrumResult out;
  const int K = count_below(V, 0.0, opt);
  if (K == 0) return out;
  const double vmin = min_sample(V);
  double floor_lam = vmin - 1e-9 * std::max(1.0, std::abs(vmin));
  std::vector<double> lams;
  double lo = floor_lam;
  for (int j = 1; j <= K; ++j) {
    // smallest interval [lo, hi] with count(lo) = j - 1, count(hi) = j
    double a = lo, b = 0.0;
    while (b - a > 1e-6 * std::max(1.0, std::abs(vmin))) {
      double m = 0.5 * (a + b);
      if (count_below(V, m, opt) >= j) b = m;
      else a = m;
    }
    auto F = [&](double lam) { return growth(pruefer_end(V, lam, opt), std::sqrt(-lam)); };
    double fa = F(a), fb = F(b);
    double root;
    if (fa == 0.0) root = a;
    else if (fb == 0.0) root = b;
    else {
      if (fa * fb > 0) throw std::runtime_error("discrete_spectrum: lost the sign change of the shooting function");
      std::uintmax_t it = 200;
      auto r = boost::math::tools::toms748_solve(F, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(50), it);
      root = 0.5 * (r.first + r.second);
    }
    lams.push_back(root);
    lo = b;
  }
  for (int j = 0; j < K; ++j) out.states.push_back(build_state(V, lams[j], j - K, opt));
  return out;
}

std::string to_string(ResonanceStatus s) {
  switch (s) {
    case ResonanceStatus::Absent: return "absent";
    case ResonanceStatus::Present: return "present";
    case ResonanceStatus::Marginal: return "marginal";
  }
  return "unknown";
}

ResonanceData resonance_check(const CompactPotential& V, const H0Options& opt) {
  ResonanceData r;
  r.x0 = V.x0();
  r.grid = SlowGrid(-r.x0, r.x0, opt.resonance_points);
  const SlowGrid& G = r.grid;
  const int N = G.size();
  std::vector<double> stops(G.nodes().data() + 1, G.nodes().data() + N);
  stops.back() = r.x0;
  auto u = shoot(V, 0.0, -r.x0, {1.0, 0.0}, stops, opt);
  r.psi = RVec(N);
  r.dpsi = RVec(N);
  r.psi[0] = 1.0;
  r.dpsi[0] = 0.0;
  for (int i = 1; i < N; ++i) r.psi[i] = u[i - 1].u, r.dpsi[i] = u[i - 1].du;
  const double end = r.psi[N - 1];
  r.residual = std::abs(r.dpsi[N - 1]) / r.psi.cwiseAbs().maxCoeff();
  r.status = r.residual < opt.resonance_tol   ? ResonanceStatus::Present
             : r.residual < opt.marginal_tol ? ResonanceStatus::Marginal
                                             : ResonanceStatus::Absent;
  double s = 1.0 / std::sqrt(1.0 + end * end);
  if (end < 0) s = -s;
  r.psi *= s;
  r.dpsi *= s;
  r.beta_minus = s;
  r.beta_plus = s * end;

  auto c = shoot(V, 0.0, -r.x0, {0.0, 1.0 / r.beta_minus}, stops, opt);
  r.companion = RVec(N);
  r.dcompanion = RVec(N);
  r.companion[0] = 0.0;
  r.dcompanion[0] = 1.0 / r.beta_minus;
  for (int i = 1; i < N; ++i) r.companion[i] = c[i - 1].u, r.dcompanion[i] = c[i - 1].du;
  return r;
}

SlowSolution solve_H0_shifted(const RVec& f, const BoundState& st, double tol) {
  const SlowGrid& G = st.grid;
  const int N = G.size(), half = N / 2;
  if (f.size() != N) throw std::invalid_argument("solve_H0_shifted: f is not sampled on the state grid");
  RVec fp = f.cwiseProduct(st.psi);
  double fn = std::sqrt(G.integral(RVec(f.cwiseProduct(f))));
  double s = G.integral(fp);
  if (std::abs(s) > tol * std::max(fn, 1e-6)) {
    std::ostringstream os;
    os << "solve_H0_shifted: (f, psi_0) = " << s << " violates solvability (|f| = " << fn << ")";
    throw SolvabilityViolation(os.str());
  }
  // u = psi P - chi Q with P = int_0^x chi f and Q = int_{-inf}^x psi f (x < 0) or -int_x^inf psi f
  // (x > 0); each piece is taken from the nearer end so no growing solution is cancelled out
  RVec C = G.cumulative(RVec(st.chi.cwiseProduct(f)));
  RVec Ql = G.cumulative(fp), Qr = reverse_cumulative(G, fp);
  SlowSolution out{RVec(N), RVec(N)};
  for (int i = 0; i < N; ++i) {
    double P = C[i] - C[half];
    double Q = i <= half ? Ql[i] : -Qr[i];
    out.u[i] = st.psi[i] * P - st.chi[i] * Q;
    out.du[i] = st.dpsi[i] * P - st.dchi[i] * Q;
  }
  double g = G.integral(RVec(out.u.cwiseProduct(st.psi)));
  out.u -= g * st.psi;
  out.du -= g * st.dpsi;
  return out;
}

SlowSolution solve_S(const RVec& f, const ResonanceData& r, double tol) {
  const SlowGrid& G = r.grid;
  const int N = G.size();
  if (f.size() != N) throw std::invalid_argument("solve_S: f is not sampled on the resonance grid");
  const double fmax = std::max(f.cwiseAbs().maxCoeff(), 1e-6);
  if (std::max(std::abs(f[0]), std::abs(f[N - 1])) > tol * fmax)
    throw SolvabilityViolation("solve_S: f does not vanish at +-x0");
  RVec fp = f.cwiseProduct(r.psi), fc = f.cwiseProduct(r.companion);
  double s = G.integral(fp);
  if (std::abs(s) > tol * fmax) {
    std::ostringstream os;
    os << "solve_S: int f psi_0 = " << s << " violates solvability";
    throw SolvabilityViolation(os.str());
  }
  RVec A = G.cumulative(fc), B = reverse_cumulative(G, fp);
  const double c = A[N - 1];
  SlowSolution out;
  RVec Ac = (A.array() - c / 2.0).matrix();
  out.u = r.psi.cwiseProduct(Ac) + r.companion.cwiseProduct(B);
  out.du = r.dpsi.cwiseProduct(Ac) + r.dcompanion.cwiseProduct(B);
  return out;
}

}  // namespace lacuna
