#include "lacuna/oracle.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

namespace lacuna {

namespace {
constexpr double kPi = std::numbers::pi;
using ld = long double;

struct Shooter {
  const CompactPotential& V;
  const PeriodicPotential& a;
  double eps;
  int band;
  const OracleOptions& opt;
  int R = 0;  // outer boundary in cells

  Shooter(const CompactPotential& V_, const PeriodicPotential& a_, double e, int b, const OracleOptions& o)
      : V(V_), a(a_), eps(e), band(b), opt(o) {
    R = static_cast<int>(std::ceil(support_radius(V) / eps - 1e-12));
    if (R < 1) R = 1;
  }

  int cells_for(const Multipliers& mu) const {
    double lk = std::log(std::abs(mu.kappa.real()));
    int extra = opt.extra_cells_cap;
    if (lk > 0) extra = std::min<int>(extra, static_cast<int>(std::ceil(opt.efolds / lk)));
    return R + std::max(extra, 0);
  }

  struct Eval {
    double W = 0.0;
    BlochSolution p, m;
    bool valid = false;
    int cells = 0;
  };

  // Wronskian of the two decaying solutions at xi = 0, with the Bloch vectors oriented
  // against `ref` (if given) so that W stays continuous along a scan.
  Eval eval(Energy e, const Eval* ref = nullptr) const {
    Eval r;
    MonodromyData md = monodromy(a, eps, e);
    std::pair<BlochSolution, BlochSolution> bs;
    try {
      bs = bloch_solutions(md);
    } catch (const NoDecayError&) {
      return r;
    }
    r.p = bs.first;
    r.m = bs.second;
    if (ref && ref->valid) {
      if (r.p.u0 * ref->p.u0 + r.p.du0 * ref->p.du0 < 0) r.p.u0 = -r.p.u0, r.p.du0 = -r.p.du0;
      if (r.m.u0 * ref->m.u0 + r.m.du0 * ref->m.du0 < 0) r.m.u0 = -r.m.u0, r.m.du0 = -r.m.du0;
    }
    int L = cells_for(multipliers(md));
    r.cells = L;
    const ld t = static_cast<ld>(eps) * eps;
    const ld nu = e.nu;
    auto q = [&](ld xi) { return t * (static_cast<ld>(a(static_cast<double>(xi))) + V(eps * static_cast<double>(xi)) - nu); };
    ld k = std::numbers::pi_v<ld> * e.n;
    double M = kPi * kPi * e.n * e.n + eps * eps * e.nu;
    OdeOptions o = cell_ode_options(M);
    o.abs_tol = 1e-18;
    o.rel_tol = 1e-16;
    o.max_step = std::min(o.max_step, opt.max_step_x);
    Vec2T<ld> yr = propagate<ld>(q, k, static_cast<ld>(L), 0.0L, {r.p.u0, r.p.du0}, o);
    Vec2T<ld> yl = propagate<ld>(q, k, static_cast<ld>(-L), 0.0L, {r.m.u0, r.m.du0}, o);
    ld scale = std::max<ld>(1.0L, k);
    ld nr = std::hypot(yr.u, yr.du / scale), nl = std::hypot(yl.u, yl.du / scale);
    r.W = static_cast<double>((yl.u * yr.du - yl.du * yr.u) / (scale * nr * nl));
    r.valid = std::isfinite(r.W);
    return r;
  }
};

double lowest_bound(const CompactPotential& V, const PeriodicPotential& a) {
  double vmin = 0.0, amin = 0.0;
  double x0 = support_radius(V);
  for (int j = 0; j <= 4000; ++j) vmin = std::min(vmin, V(-x0 + 2.0 * x0 * j / 4000.0));
  for (int j = 0; j < 4000; ++j) amin = std::min(amin, a(j / 4000.0));
  return vmin + amin - 1.0;
}
}  // namespace

double shooting_mismatch(const CompactPotential& V, const PeriodicPotential& a, double eps, Energy e,
                         const OracleOptions& opt) {
  Shooter s(V, a, eps, e.n, opt);
  auto r = s.eval(e);
  return r.valid ? r.W : std::nan("");
}

OracleResult gap_eigenvalues(const CompactPotential& V, const PeriodicPotential& a, double eps, int band,
                             const OracleOptions& opt) {
  OracleResult res;
  res.eps = eps;
  res.band = band;
  Shooter sh(V, a, eps, band, opt);
  EdgeResult edges = band_edges_numeric(a, eps, band);
  double lo, hi;  // nu window
  if (band == 0) {
    hi = edges.upper.nu;
    lo = std::min(lowest_bound(V, a), hi - 1.0);
    res.edge_hi = edges.upper;
    res.edge_lo = Energy{0, lo};
  } else {
    if (edges.degenerate || !(edges.upper.nu > edges.lower.nu)) {
      res.no_gap = true;
      res.note = "gap closed or below resolution";
      return res;
    }
    lo = edges.lower.nu;
    hi = edges.upper.nu;
    res.edge_lo = edges.lower;
    res.edge_hi = edges.upper;
  }
  res.window_lo = Energy{band, lo}.lambda(eps);
  res.window_hi = Energy{band, hi}.lambda(eps);
  res.cells = sh.R + opt.extra_cells_cap;
  res.half_length = res.cells * eps;

  // sample points: uniform interior plus geometric clustering at the edge(s) next to the bands
  std::vector<double> pts;
  double w = hi - lo;
  for (int j = 1; j < opt.scan_points; ++j) pts.push_back(lo + w * j / opt.scan_points);
  double d = w / opt.scan_points;
  for (int j = 0; j < opt.edge_refinement; ++j) {
    d *= opt.edge_ratio;
    if (d < 4e-16 * std::max(1.0, std::abs(hi))) break;
    pts.push_back(hi - d);
    if (band > 0) pts.push_back(lo + d);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Shooter::Eval> ev;
  ev.reserve(pts.size());
  const Shooter::Eval* prev = nullptr;
  for (double nu : pts) {
    ev.push_back(sh.eval(Energy{band, nu}, prev));
    if (ev.back().valid) prev = &ev.back();
  }
  for (size_t j = 0; j + 1 < pts.size(); ++j) {
    const auto &A = ev[j], &B = ev[j + 1];
    if (!A.valid || !B.valid) continue;
    if ((A.W > 0) == (B.W > 0) && A.W != 0.0) continue;
    auto f = [&](double nu) {
      auto r = sh.eval(Energy{band, nu}, &A);
      return r.valid ? r.W : A.W;
    };
    double root;
    if (A.W == 0.0) root = pts[j];
    else {
      boost::uintmax_t it = 200;
      auto tol = [](double x, double y) { return std::abs(x - y) <= 2e-16 * std::max({1.0, std::abs(x), std::abs(y)}); };
      auto br = boost::math::tools::toms748_solve(f, pts[j], pts[j + 1], A.W, B.W, tol, it);
      root = 0.5 * (br.first + br.second);
    }
    double mis = std::abs(f(root));
    if (mis > opt.mismatch_tol) continue;  // orientation flip, not an eigenvalue
    OracleLevel L;
    L.energy = Energy{band, root};
    L.lambda = L.energy.lambda(eps);
    L.mismatch = mis;
    L.distance_to_upper = hi - root;
    L.distance_to_lower = root - lo;
    res.levels.push_back(L);
  }
  return res;
}

OrderFit fit_convergence_order(const std::vector<std::pair<double, double>>& samples, double floor) {
  OrderFit f;
  std::vector<std::pair<double, double>> pts;
  for (auto [e, err] : samples) {
    if (std::abs(err) <= floor || err == 0.0) {
      f.saturated = true;
      continue;
    }
    pts.push_back({std::log(e), std::log(std::abs(err))});
  }
  if (pts.size() < 2) {
    f.note = "fewer than two unsaturated samples";
    f.order = std::nan("");
    return f;
  }
  double n = pts.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
  f.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.constant = std::exp((sy - f.order * sx) / n);
  if (f.saturated) f.note = "samples at the precision floor were dropped";
  return f;
}

}  // namespace lacuna
