#include "lacuna/floquet.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "lacuna/cell_ops.hpp"

namespace lacuna {

namespace {
constexpr double kPi = std::numbers::pi;
using ld = long double;

// Root of f on [lo, hi] where f(lo), f(hi) have opposite signs.
template <class F>
double find_root(F f, double lo, double hi, double flo, double fhi) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  boost::uintmax_t it = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) <= 4e-16 * std::max({1.0, std::abs(a), std::abs(b)}); };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, it);
  return 0.5 * (r.first + r.second);
}
}  // namespace

double Energy::lambda(double eps) const { return kPi * kPi * n * n / (eps * eps) + nu; }

Energy Energy::from_lambda(double lambda, double eps) {
  Energy e;
  double M = eps * eps * lambda;
  e.n = M > 0 ? static_cast<int>(std::lround(std::sqrt(M) / kPi)) : 0;
  e.nu = lambda - kPi * kPi * e.n * e.n / (eps * eps);
  return e;
}

OdeOptions cell_ode_options(double M) {
  OdeOptions o;
  o.abs_tol = 1e-19;
  o.rel_tol = 1e-17;
  o.max_step = std::min(1.0 / 64, 1.0 / (50.0 * std::sqrt(std::max(std::abs(M), 1e-300))));
  return o;
}

MonodromyData monodromy(const PeriodicPotential& a, double eps, double lambda) {
  return monodromy(a, eps, Energy::from_lambda(lambda, eps));
}

MonodromyData monodromy(const PeriodicPotential& a, double eps, Energy e) {
  MonodromyData m;
  m.eps = eps;
  m.energy = e;
  m.lambda = e.lambda(eps);
  const ld t = static_cast<ld>(eps) * eps;
  const ld nu = e.nu;
  const auto& cs = a.cos_coeffs();
  const auto& sn = a.sin_coeffs();
  auto q = [&](ld xi) {
    ld v = 0;
    for (size_t k = 0; k < cs.size(); ++k) v += cs[k] * std::cos(2 * std::numbers::pi_v<ld> * (k + 1) * xi);
    for (size_t k = 0; k < sn.size(); ++k) v += sn[k] * std::sin(2 * std::numbers::pi_v<ld> * (k + 1) * xi);
    return t * (v - nu);
  };
  double M = kPi * kPi * e.n * e.n + eps * eps * e.nu;
  OdeOptions opt = cell_ode_options(M);
  if (e.n >= 1) {
    ld k = std::numbers::pi_v<ld> * e.n;
    Mat2T<ld> Z = deviation_propagator<ld>(q, k, 0.0L, 1.0L, opt);
    double s = (e.n % 2 == 0) ? 1.0 : -1.0;
    m.phi1 = s * static_cast<double>(1 + Z.a);
    m.phi2 = s * static_cast<double>(Z.b);
    m.dphi1 = s * static_cast<double>(Z.c);
    m.dphi2 = s * static_cast<double>(1 + Z.d);
    m.dev11 = s * static_cast<double>(Z.a);
    m.dev22 = s * static_cast<double>(Z.d);
    m.edge_dev = s * static_cast<double>(Z.a + Z.d);
  } else {
    Mat2T<ld> Z = deviation_propagator<ld>(q, 0.0L, 0.0L, 1.0L, opt);
    // U(1) = [[1, 1], [0, 1]]
    m.phi1 = static_cast<double>(1 + Z.a + Z.c);
    m.phi2 = static_cast<double>(Z.b + 1 + Z.d);
    m.dphi1 = static_cast<double>(Z.c);
    m.dphi2 = static_cast<double>(1 + Z.d);
    m.dev11 = static_cast<double>(Z.a + Z.c);
    m.dev22 = static_cast<double>(Z.d);
    m.edge_dev = static_cast<double>(Z.a + Z.c + Z.d);
  }
  m.D = m.phi1 + m.dphi2;
  return m;
}

Multipliers multipliers(double D) {
  Multipliers r;
  if (std::abs(D) > 2.0) {
    double s = D > 0 ? 1.0 : -1.0;
    double k = 0.5 * (D + s * std::sqrt(D * D - 4.0));
    r.kappa = k;
    r.kappa_inv = 1.0 / k;
    r.in_gap = true;
  } else {
    double th = std::acos(std::clamp(0.5 * D, -1.0, 1.0));
    r.kappa = std::polar(1.0, th);
    r.kappa_inv = std::polar(1.0, -th);
  }
  return r;
}

Multipliers multipliers(const MonodromyData& m) {
  int s = m.edge_sign();
  double dev = m.edge_dev;
  if (s * dev > 0) {
    double d = std::abs(dev);
    double k = s * (1.0 + 0.5 * d + 0.5 * std::sqrt(d * (4.0 + d)));
    Multipliers r;
    r.kappa = k;
    r.kappa_inv = 1.0 / k;
    r.in_gap = true;
    return r;
  }
  return multipliers(m.D);
}

std::pair<BlochSolution, BlochSolution> bloch_solutions(const MonodromyData& m, double edge_tol) {
  int s = m.edge_sign();
  double dev = m.edge_dev;
  if (s * dev < -edge_tol) {
    // might still be a gap of the neighbouring parity
    if (std::abs(m.D) <= 2.0) throw NoDecayError("bloch_solutions: spectral parameter lies inside a band");
  }
  double d, km1, kinv_m1, kappa;  // kappa - s and kappa^{-1} - s without cancellation
  if (s * dev > 0) {
    d = std::abs(dev);
    double root = std::sqrt(d * (4.0 + d));
    km1 = s * 0.5 * (d + root);
    kinv_m1 = s * 0.5 * (d - root);
    kappa = s + km1;
  } else if (std::abs(m.D) > 2.0) {
    // far from the reference edge (other parity); plain formulas are well conditioned there
    Multipliers mu = multipliers(m.D);
    kappa = mu.kappa.real();
    km1 = kappa - s;
    kinv_m1 = 1.0 / kappa - s;
  } else {
    kappa = s;
    km1 = kinv_m1 = 0.0;
  }
  auto make = [&](double mult_minus_s, Direction dir, double mult) {
    // eigenvector of the monodromy for eigenvalue mult
    double a1 = m.phi2, a2 = mult_minus_s - m.dev11;
    double b1 = mult_minus_s - m.dev22, b2 = m.dphi1;
    double n1 = std::hypot(a1, a2), n2 = std::hypot(b1, b2);
    BlochSolution b;
    b.direction = dir;
    b.kappa = mult;
    b.log_multiplier = std::log(cplx(mult, 0.0));
    double u = n1 >= n2 ? a1 / n1 : b1 / n2;
    double du = n1 >= n2 ? a2 / n1 : b2 / n2;
    if (n1 == 0.0 && n2 == 0.0) {
      u = 1.0;
      du = 0.0;
    }
    if ((std::abs(u) > 1e-3 && u < 0) || (std::abs(u) <= 1e-3 && du < 0)) {
      u = -u;
      du = -du;
    }
    b.u0 = u;
    b.du0 = du;
    return b;
  };
  BlochSolution plus = make(kinv_m1, Direction::DecayRight, 1.0 / kappa);
  BlochSolution minus = make(km1, Direction::DecayLeft, kappa);
  return {plus, minus};
}

std::pair<BlochSolution, BlochSolution> bloch_solutions(const PeriodicPotential& a, double eps, double lambda) {
  return bloch_solutions(monodromy(a, eps, lambda));
}

double bloch_wronskian(const BlochSolution& p, const BlochSolution& m) { return p.u0 * m.du0 - p.du0 * m.u0; }

std::vector<Mat2> cell_fundamental(const PeriodicPotential& a, double eps, Energy e, const std::vector<double>& r) {
  const double t = eps * eps;
  auto q = [&](double xi) { return t * (a(xi) - e.nu); };
  double k = kPi * e.n;
  double M = kPi * kPi * e.n * e.n + t * e.nu;
  OdeOptions opt = cell_ode_options(M);
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-14;
  std::vector<double> stops;
  for (double x : r) stops.push_back(x);
  std::vector<Mat2> out(r.size());
  if (r.empty()) return out;
  // propagate_samples requires stops after the start; handle r == 0 directly
  std::vector<double> pos;
  std::vector<size_t> idx;
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i] <= 0.0) out[i] = {1, 0, 0, 1};
    else {
      pos.push_back(r[i]);
      idx.push_back(i);
    }
  }
  if (pos.empty()) return out;
  auto c1 = propagate_samples<double>(q, k, 0.0, Vec2{1.0, 0.0}, pos, opt);
  auto c2 = propagate_samples<double>(q, k, 0.0, Vec2{0.0, 1.0}, pos, opt);
  for (size_t j = 0; j < pos.size(); ++j) out[idx[j]] = {c1[j].u, c2[j].u, c1[j].du, c2[j].du};
  return out;
}

std::vector<double> periodic_factor_samples(const PeriodicPotential& a, double eps, Energy e,
                                            const BlochSolution& b, int samples) {
  std::vector<double> r;
  for (int j = 0; j <= samples; ++j) r.push_back(double(j) / samples);
  auto Y = cell_fundamental(a, eps, e, r);
  double lk = std::log(std::abs(b.kappa.real()));
  std::vector<double> out;
  for (size_t j = 0; j < r.size(); ++j) {
    double th = Y[j].a * b.u0 + Y[j].b * b.du0;
    out.push_back(std::exp(-lk * r[j]) * th);
  }
  return out;
}

EdgeResult band_edges_numeric(const PeriodicPotential& a, double eps, int n) {
  EdgeResult res;
  if (n == 0) {
    auto f = [&](double lam) { return monodromy(a, eps, Energy{0, lam}).edge_dev; };
    double amp = 0.0;
    for (double c : a.cos_coeffs()) amp += std::abs(c);
    for (double c : a.sin_coeffs()) amp += std::abs(c);
    double B = amp + 1.0;
    double flo = f(-B), fhi = f(B);
    for (int it = 0; it < 30 && !(flo > 0 && fhi < 0); ++it) {
      B *= 1.5;
      flo = f(-B);
      fhi = f(B);
    }
    if (!(flo > 0 && fhi < 0)) {
      res.degenerate = true;
      res.note = "could not bracket the lowest edge";
      return res;
    }
    res.upper = Energy{0, find_root(f, -B, B, flo, fhi)};
    res.lower = res.upper;
    return res;
  }
  const int s = (n % 2 == 0) ? 1 : -1;
  auto g = [&](double nu) { return s * monodromy(a, eps, Energy{n, nu}).edge_dev; };
  auto [an, bn] = fourier_pair(a, n);
  double B = 4.0 * std::hypot(an, bn) + 1.0;
  double inside = 0.0;
  bool found = false;
  try {
    EdgePair E = edge_series_n(a, n, 1);
    inside = 0.5 * (E.plus.edge_offset(eps, 1) + E.minus.edge_offset(eps, 1));
    found = g(inside) > 0;
  } catch (const std::exception&) {
  }
  if (!found) {
    double best = -1e300;
    for (int j = 0; j <= 400; ++j) {
      double nu = -B + 2.0 * B * j / 400.0;
      double v = g(nu);
      if (v > best) {
        best = v;
        inside = nu;
      }
    }
    found = best > 0;
  }
  if (!found) {
    res.degenerate = true;
    res.note = "gap narrower than the discriminant resolution";
    res.lower = res.upper = Energy{n, inside};
    return res;
  }
  double lo = inside - B, hi = inside + B;
  double glo = g(lo), ghi = g(hi);
  for (int it = 0; it < 20 && glo > 0; ++it) glo = g(lo -= B);
  for (int it = 0; it < 20 && ghi > 0; ++it) ghi = g(hi += B);
  double gin = g(inside);
  res.lower = Energy{n, find_root(g, lo, inside, glo, gin)};
  res.upper = Energy{n, find_root(g, inside, hi, gin, ghi)};
  return res;
}

}  // namespace lacuna
