#pragma once

// Acceptance suite: each criterion is checked against values computed by an independent route
// (the shooting oracle, a separate integrator, or closed forms evaluated by direct quadrature).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lacuna {

enum class Verdict { Pass, Fail, Saturated };
std::string to_string(Verdict v);

struct CriterionOutcome {
  int id = 0;
  std::string name;
  Verdict verdict = Verdict::Fail;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;  // runtime limit in seconds, 0 if none
};

struct AcceptanceOptions {
  // Identity tolerance for the coefficient and Wronskian checks. A value below the double
  // precision floor turns an otherwise failing identity into Saturated instead of Fail.
  double tolerance = 1e-10;
  std::uint64_t seed = 20240607;
  std::vector<int> only;  // empty: all criteria
};

// Round-off floor for the identity checks; tolerances below it cannot be met honestly.
constexpr double kPrecisionFloor = 1e-14;

std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& opt = {},
                                             const std::function<void(const CriterionOutcome&)>& on_done = {});

bool suite_passed(const std::vector<CriterionOutcome>& r);

}  // namespace lacuna
