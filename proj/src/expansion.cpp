#include "lacuna/expansion.hpp"

#include <numbers>

namespace lacuna {

std::string to_string(ExpansionKind k) {
  switch (k) {
    case ExpansionKind::BoundState: return "bound_state";
    case ExpansionKind::Resonance: return "resonance";
    case ExpansionKind::EdgeMinus: return "edge_minus";
    case ExpansionKind::EdgePlus: return "edge_plus";
  }
  return "unknown";
}

namespace {
double horner(const std::vector<double>& c, double eps, int upto) {
  int top = upto < 0 ? static_cast<int>(c.size()) - 1 : std::min(upto, static_cast<int>(c.size()) - 1);
  double s = 0.0;
  for (int i = top; i >= 0; --i) s = s * eps + c[i];
  return s;
}
}  // namespace

double EigenvalueExpansion::value(double eps, int upto) const {
  double v = base + horner(lambda, eps, upto < 0 ? order : upto);
  if (kind == ExpansionKind::EdgeMinus || kind == ExpansionKind::EdgePlus)
    v += std::numbers::pi * std::numbers::pi * double(n) * n / (eps * eps);
  return v;
}

double EigenvalueExpansion::tau_value(double eps, int upto) const { return horner(tau, eps, upto); }

}  // namespace lacuna
