#include "lacuna/fourier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lacuna {

namespace {
constexpr double kPi = std::numbers::pi;
std::atomic<double> g_tail{0.0};

void record_tail(double frac) {
  double cur = g_tail.load();
  while (frac > cur && !g_tail.compare_exchange_weak(cur, frac)) {
  }
}
}  // namespace

double truncation_tail_fraction() { return g_tail.load(); }
void reset_truncation_monitor() { g_tail.store(0.0); }

Parity product_parity(Parity p, Parity q) { return p == q ? Parity::Periodic : Parity::Antiperiodic; }

CellFunction::CellFunction(Parity p, int max_mode) : parity_(p), max_mode_(max_mode), c_(2 * max_mode + 1) {}

bool CellFunction::admits(int m) const {
  if (std::abs(m) > max_mode_) return false;
  bool even = (m % 2 == 0);
  return parity_ == Parity::Periodic ? even : !even;
}

cplx CellFunction::coeff(int m) const { return std::abs(m) > max_mode_ ? cplx{} : c_[m + max_mode_]; }

void CellFunction::set(int m, cplx v) {
  if (!admits(m)) throw std::logic_error("CellFunction: mode has wrong parity or exceeds cutoff");
  if (m == 0) {
    c_[max_mode_] = cplx(v.real(), 0.0);
  } else {
    c_[m + max_mode_] = v;
    c_[-m + max_mode_] = std::conj(v);
  }
}

void CellFunction::add(int m, cplx v) { set(m, coeff(m) + v); }

double CellFunction::operator()(double xi) const {
  double s = 0.0;
  for (int m = -max_mode_; m <= max_mode_; ++m) {
    const cplx& c = c_[m + max_mode_];
    if (c == cplx{}) continue;
    double ph = kPi * m * xi;
    s += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
  }
  return s;
}

double CellFunction::derivative(double xi, int order) const {
  double s = 0.0;
  for (int m = -max_mode_; m <= max_mode_; ++m) {
    cplx c = c_[m + max_mode_];
    if (c == cplx{}) continue;
    c *= std::pow(cplx(0.0, kPi * m), order);
    double ph = kPi * m * xi;
    s += c.real() * std::cos(ph) - c.imag() * std::sin(ph);
  }
  return s;
}

double CellFunction::mean() const { return parity_ == Parity::Periodic ? c_[max_mode_].real() : 0.0; }

double CellFunction::norm_sq() const {
  double s = 0.0;
  for (const cplx& c : c_) s += std::norm(c);
  return s;
}

double CellFunction::coeff_norm() const { return std::sqrt(norm_sq()); }

double CellFunction::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& c : c_) m = std::max(m, std::abs(c));
  return m;
}

CellFunction CellFunction::derivative_fn(int order) const {
  CellFunction d(parity_, max_mode_);
  for (int m = -max_mode_; m <= max_mode_; ++m) d.c_[m + max_mode_] = c_[m + max_mode_] * std::pow(cplx(0.0, kPi * m), order);
  return d;
}

CellFunction& CellFunction::operator+=(const CellFunction& o) {
  if (o.parity_ != parity_) throw std::logic_error("CellFunction: adding functions of different parity");
  if (o.max_mode_ > max_mode_) {
    CellFunction w(parity_, o.max_mode_);
    for (int m = -max_mode_; m <= max_mode_; ++m) w.c_[m + w.max_mode_] = c_[m + max_mode_];
    *this = std::move(w);
  }
  for (int m = -o.max_mode_; m <= o.max_mode_; ++m) c_[m + max_mode_] += o.c_[m + o.max_mode_];
  return *this;
}

CellFunction& CellFunction::operator-=(const CellFunction& o) {
  CellFunction neg = o;
  neg *= -1.0;
  return *this += neg;
}

CellFunction& CellFunction::operator*=(double s) {
  for (cplx& c : c_) c *= s;
  return *this;
}

CellFunction operator*(const CellFunction& a, const CellFunction& b) {
  int K = std::max(a.max_mode_, b.max_mode_);
  CellFunction r(product_parity(a.parity_, b.parity_), K);
  double kept = 0.0, dropped = 0.0;
  std::vector<int> ia, ib;
  for (int m = -a.max_mode_; m <= a.max_mode_; ++m)
    if (a.c_[m + a.max_mode_] != cplx{}) ia.push_back(m);
  for (int m = -b.max_mode_; m <= b.max_mode_; ++m)
    if (b.c_[m + b.max_mode_] != cplx{}) ib.push_back(m);
  std::vector<cplx> over;
  for (int p : ia) {
    const cplx& ca = a.c_[p + a.max_mode_];
    for (int q : ib) {
      int m = p + q;
      cplx v = ca * b.c_[q + b.max_mode_];
      if (std::abs(m) <= K) r.c_[m + K] += v;
      else dropped += std::norm(v);
    }
  }
  if (dropped > 0.0) {
    kept = r.norm_sq();
    if (kept > 0.0) record_tail(std::sqrt(dropped / (kept + dropped)));
  }
  return r;
}

CellFunction CellFunction::constant(double v, int max_mode) {
  CellFunction f(Parity::Periodic, max_mode);
  f.set(0, v);
  return f;
}

CellFunction CellFunction::cos_mode(int n, double alpha, int max_mode) {
  CellFunction f(parity_of_band(n), max_mode);
  cplx e = std::polar(1.0, alpha) / std::sqrt(2.0);
  if (n == 0) f.set(0, std::sqrt(2.0) * std::cos(alpha));
  else f.set(n, e);
  return f;
}

CellFunction CellFunction::sin_mode(int n, double alpha, int max_mode) {
  CellFunction f(parity_of_band(n), max_mode);
  // sqrt2 sin(theta) = (e^{i theta} - e^{-i theta}) / (i sqrt2)
  cplx e = std::polar(1.0, alpha) / (cplx(0.0, 1.0) * std::sqrt(2.0));
  if (n == 0) f.set(0, std::sqrt(2.0) * std::sin(alpha));
  else f.set(n, e);
  return f;
}

double inner(const CellFunction& f, const CellFunction& g) {
  if (f.parity() != g.parity()) throw std::logic_error("inner: parity mismatch");
  int K = std::min(f.max_mode(), g.max_mode());
  double s = 0.0;
  for (int m = -K; m <= K; ++m) s += (f.coeff(m) * g.coeff(-m)).real();
  return s;
}

}  // namespace lacuna
