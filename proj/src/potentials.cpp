#include "lacuna/potentials.hpp"

#include <cmath>
#include <numbers>

#include "lacuna/fourier.hpp"
#include "lacuna/quadrature.hpp"

namespace lacuna {

namespace {
constexpr double kPi = std::numbers::pi;

double bump_profile(double x, double x0) {
  double s = x / x0;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}
}  // namespace

PeriodicPotential::PeriodicPotential(std::vector<double> c, std::vector<double> s)
    : cos_(std::move(c)), sin_(std::move(s)) {
  bool any = false;
  for (double v : cos_) any = any || v != 0.0;
  for (double v : sin_) any = any || v != 0.0;
  if (!any) throw ConfigError("periodic potential is identically zero");
}

PeriodicPotential PeriodicPotential::cosine(double amplitude, int k) {
  std::vector<double> c(k, 0.0);
  c[k - 1] = amplitude;
  return PeriodicPotential(c, {});
}

PeriodicPotential PeriodicPotential::sine(double amplitude, int k) {
  std::vector<double> s(k, 0.0);
  s[k - 1] = amplitude;
  return PeriodicPotential({}, s);
}

double PeriodicPotential::operator()(double xi) const {
  double v = 0.0;
  for (size_t k = 0; k < cos_.size(); ++k) v += cos_[k] * std::cos(2 * kPi * (k + 1) * xi);
  for (size_t k = 0; k < sin_.size(); ++k) v += sin_[k] * std::sin(2 * kPi * (k + 1) * xi);
  return v;
}

double PeriodicPotential::derivative(double xi) const {
  double v = 0.0;
  for (size_t k = 0; k < cos_.size(); ++k) {
    double w = 2 * kPi * (k + 1);
    v -= cos_[k] * w * std::sin(w * xi);
  }
  for (size_t k = 0; k < sin_.size(); ++k) {
    double w = 2 * kPi * (k + 1);
    v += sin_[k] * w * std::cos(w * xi);
  }
  return v;
}

double PeriodicPotential::l2_norm_sq() const {
  double s = 0.0;
  for (double c : cos_) s += 0.5 * c * c;
  for (double c : sin_) s += 0.5 * c * c;
  return s;
}

PeriodicPotential PeriodicPotential::scaled(double s) const {
  auto c = cos_, d = sin_;
  for (double& v : c) v *= s;
  for (double& v : d) v *= s;
  return PeriodicPotential(c, d);
}

CellFunction PeriodicPotential::to_cell(int max_mode) const {
  CellFunction f(Parity::Periodic, max_mode);
  for (size_t k = 0; k < cos_.size(); ++k)
    if (2 * static_cast<int>(k + 1) <= max_mode) f.add(2 * (k + 1), cplx(0.5 * cos_[k], 0.0));
  for (size_t k = 0; k < sin_.size(); ++k)
    if (2 * static_cast<int>(k + 1) <= max_mode) f.add(2 * (k + 1), cplx(0.0, -0.5 * sin_[k]));
  return f;
}

std::pair<double, double> fourier_pair(const PeriodicPotential& a, int n) {
  if (n < 1) return {0.0, 0.0};
  double an = n <= static_cast<int>(a.cos_coeffs().size()) ? 0.5 * a.cos_coeffs()[n - 1] : 0.0;
  double bn = n <= static_cast<int>(a.sin_coeffs().size()) ? 0.5 * a.sin_coeffs()[n - 1] : 0.0;
  return {an, bn};
}

std::pair<PeriodicPotential, double> normalize_zero_mean(double c0, std::vector<double> c,
                                                         std::vector<double> s) {
  return {PeriodicPotential(std::move(c), std::move(s)), c0};
}

std::string to_string(CompactKind k) {
  switch (k) {
    case CompactKind::Bump: return "bump";
    case CompactKind::PoschlTeller: return "poschl_teller";
    case CompactKind::PolyBump: return "poly_bump";
    case CompactKind::GaussBump: return "gauss_bump";
    case CompactKind::SmoothWell: return "smooth_well";
    case CompactKind::Tabulated: return "tabulated";
  }
  return "?";
}

CompactKind compact_kind_from_string(const std::string& s) {
  if (s == "bump") return CompactKind::Bump;
  if (s == "poschl_teller") return CompactKind::PoschlTeller;
  if (s == "poly_bump") return CompactKind::PolyBump;
  if (s == "gauss_bump") return CompactKind::GaussBump;
  if (s == "smooth_well") return CompactKind::SmoothWell;
  if (s == "tabulated") return CompactKind::Tabulated;
  throw ConfigError("unknown compact.kind '" + s + "'");
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double f = std::exp(-1.0 / t), g = std::exp(-1.0 / (1.0 - t));
  return f / (f + g);
}

CompactPotential::CompactPotential(CompactKind kind, std::vector<double> params, double x0)
    : kind_(kind), params_(std::move(params)), x0_(x0) {
  if (!(x0_ > 0.0)) throw ConfigError("compact.x0 must be positive");
  auto need = [&](size_t n) {
    if (params_.size() < n)
      throw ConfigError("compact.params for " + to_string(kind_) + " needs " + std::to_string(n) +
                        " values");
  };
  switch (kind_) {
    case CompactKind::Bump: need(1); break;
    case CompactKind::PoschlTeller:
      need(3);
      if (!(params_[2] > 0.0 && params_[2] < x0_)) throw ConfigError("poschl_teller cutoff width must lie in (0, x0)");
      break;
    case CompactKind::PolyBump: need(1); break;
    case CompactKind::GaussBump:
      need(3);
      if (params_[1] <= 0.0) throw ConfigError("gauss_bump width must be positive");
      break;
    case CompactKind::SmoothWell:
      need(2);
      if (!(params_[1] > 0.0 && params_[1] < x0_)) throw ConfigError("smooth_well half-width must lie in (0, x0)");
      break;
    case CompactKind::Tabulated:
      if (params_.size() < 8 || params_.size() % 2) throw ConfigError("tabulated needs at least 4 (x, v) pairs");
      build_spline();
      break;
  }
}

void CompactPotential::build_spline() {
  size_t n = params_.size() / 2;
  tab_x_.resize(n);
  tab_y_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    tab_x_[i] = params_[2 * i];
    tab_y_[i] = params_[2 * i + 1];
    if (i && tab_x_[i] <= tab_x_[i - 1]) throw ConfigError("tabulated abscissae must increase");
  }
  if (tab_x_.front() < -x0_ - 1e-12 || tab_x_.back() > x0_ + 1e-12)
    throw ConfigError("tabulated samples extend beyond x0");
  // natural spline second derivatives (Thomas algorithm)
  tab_m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    double h0 = tab_x_[i] - tab_x_[i - 1], h1 = tab_x_[i + 1] - tab_x_[i];
    double diag = 2.0 * (h0 + h1);
    double rhs = 6.0 * ((tab_y_[i + 1] - tab_y_[i]) / h1 - (tab_y_[i] - tab_y_[i - 1]) / h0);
    double denom = diag - h0 * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (rhs - h0 * d[i - 1]) / denom;
  }
  for (size_t i = n - 2; i >= 1; --i) {
    tab_m_[i] = d[i] - c[i] * tab_m_[i + 1];
    if (i == 1) break;
  }
}

double CompactPotential::operator()(double x) const {
  if (std::abs(x) >= x0_) return 0.0;
  const auto& p = params_;
  double v = 0.0;
  switch (kind_) {
    case CompactKind::Bump: v = p[0] * bump_profile(x, x0_); break;
    case CompactKind::PoschlTeller: {
      double ch = std::cosh(p[1] * x);
      double cut = 1.0 - smooth_step((std::abs(x) - (x0_ - p[2])) / p[2]);
      v = -p[0] / (ch * ch) * cut;
      break;
    }
    case CompactKind::PolyBump: {
      double s = x / x0_, poly = 0.0;
      for (size_t k = p.size(); k-- > 0;) poly = poly * s + p[k];
      v = poly * bump_profile(x, x0_);
      break;
    }
    case CompactKind::GaussBump: {
      double t = (x - p[2]) / p[1];
      v = p[0] * std::exp(-t * t) * bump_profile(x, x0_);
      break;
    }
    case CompactKind::SmoothWell:
      v = -p[0] * (1.0 - smooth_step((std::abs(x) - p[1]) / (x0_ - p[1])));
      break;
    case CompactKind::Tabulated: {
      if (x <= tab_x_.front() || x >= tab_x_.back()) return 0.0;
      size_t hi = std::upper_bound(tab_x_.begin(), tab_x_.end(), x) - tab_x_.begin();
      size_t lo = hi - 1;
      double h = tab_x_[hi] - tab_x_[lo];
      double A = (tab_x_[hi] - x) / h, B = 1.0 - A;
      v = A * tab_y_[lo] + B * tab_y_[hi] +
          ((A * A * A - A) * tab_m_[lo] + (B * B * B - B) * tab_m_[hi]) * h * h / 6.0;
      break;
    }
  }
  return scale_ * v;
}

CompactPotential CompactPotential::scaled(double s) const {
  CompactPotential c = *this;
  c.scale_ *= s;
  return c;
}

double CompactPotential::integral() const {
  return lacuna::integrate([this](double x) { return (*this)(x); }, -x0_, x0_);
}

double CompactPotential::integral_sq() const {
  return lacuna::integrate([this](double x) { double v = (*this)(x); return v * v; }, -x0_, x0_);
}

double CompactPotential::l1_norm() const {
  return lacuna::integrate([this](double x) { return std::abs((*this)(x)); }, -x0_, x0_);
}

double CompactPotential::sgn_square_integral() const {
  // W(x) = int sgn(x - t) V(t) dt = 2 C(x) - C(x0), with C the running integral of V.
  // W is constant outside the support, so the integral over R is finite only when int V = 0.
  GaussRule r = composite_rule(-x0_, x0_, 64);
  double total = integral();
  double s = 0.0;
  for (size_t k = 0; k < r.x.size(); ++k) {
    double c = lacuna::integrate([this](double t) { return (*this)(t); }, -x0_, r.x[k], 64);
    double w = 2.0 * c - total;
    s += r.w[k] * w * w;
  }
  return s;
}

double support_radius(const CompactPotential& V) {
  double x0 = V.x0();
  double vmax = 0.0;
  for (int k = 0; k <= 400; ++k) {
    double x = -x0 + 2.0 * x0 * k / 400.0;
    vmax = std::max(vmax, std::abs(V(x)));
  }
  if (vmax == 0.0 || V.l1_norm() == 0.0) throw ConfigError("compact potential is identically zero");
  for (int k = 0; k <= 200; ++k) {
    double x = x0 + x0 * k / 200.0;
    if (std::abs(V(x)) > 1e-14 * vmax || std::abs(V(-x)) > 1e-14 * vmax)
      throw ConfigError("compact potential does not vanish beyond x0");
  }
  return x0;
}

}  // namespace lacuna
