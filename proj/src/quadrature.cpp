#include "lacuna/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <map>
#include <mutex>

namespace lacuna {

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  // boost returns the nonnegative zeros in increasing order
  std::vector<double> z = boost::math::legendre_p_zeros<double>(n);
  for (double x : z) {
    double dp = boost::math::legendre_p_prime<double>(n, x);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    if (x == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(w);
    } else {
      r.x.push_back(x);
      r.w.push_back(w);
      r.x.push_back(-x);
      r.w.push_back(w);
    }
  }
  return cache.emplace(n, std::move(r)).first->second;
}

GaussRule composite_rule(double a, double b, int per_unit) {
  const int order = 16;
  int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) * per_unit / order)));
  const GaussRule& g = gauss_legendre(order);
  GaussRule out;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    for (size_t k = 0; k < g.x.size(); ++k) {
      out.x.push_back(mid + 0.5 * h * g.x[k]);
      out.w.push_back(0.5 * h * g.w[k]);
    }
  }
  return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, int per_unit) {
  GaussRule r = composite_rule(a, b, per_unit);
  double s = 0.0;
  for (size_t k = 0; k < r.x.size(); ++k) s += r.w[k] * f(r.x[k]);
  return s;
}

}  // namespace lacuna
