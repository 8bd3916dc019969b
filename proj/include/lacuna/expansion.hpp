#pragma once

#include <string>
#include <vector>

namespace lacuna {

enum class ExpansionKind { BoundState, Resonance, EdgeMinus, EdgePlus };

std::string to_string(ExpansionKind k);

// lambda(eps) = base(eps) + sum_i eps^i lambda[i], where base is lambda_0^{(n)} for bound
// states (lambda[0] = lambda[1] = 0 then), zero for the resonance level, and pi^2 n^2 / eps^2
// for the finite-lacuna levels.
struct EigenvalueExpansion {
  ExpansionKind kind = ExpansionKind::BoundState;
  int n = 0;              // bound-state index (negative) or band index
  double base = 0.0;      // lambda_0^{(n)} or 0; the pi^2 n^2/eps^2 term is implicit for edge kinds
  std::vector<double> lambda;  // lambda_0 .. lambda_order
  std::vector<double> tau;     // tau_0 .. (entries below the first meaningful index are zero)
  int order = 0;
  bool physical = true;   // false when the verdict says this level does not exist
  std::vector<std::string> notes;

  double value(double eps, int upto = -1) const;  // truncated at eps^upto (default: order), base included
  double tau_value(double eps, int upto = -1) const;  // decay rate series sum eps^i tau_i
};

}  // namespace lacuna
