#pragma once

#include <functional>
#include <vector>

namespace lacuna {

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

// n-point Gauss-Legendre rule, cached per n.
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre with `per_unit` nodes per unit length (at least one panel).
double integrate(const std::function<double(double)>& f, double a, double b, int per_unit = 32);

// Nodes and weights of the composite rule used by integrate().
GaussRule composite_rule(double a, double b, int per_unit = 32);

}  // namespace lacuna
