#pragma once

// Key-value run configuration. One `key = value` per line, `#` starts a comment; a value is a
// number, a bracketed list of numbers, or a bare word.
//
//   periodic.cos = [1.0]        c_k of a(xi) = sum c_k cos 2 pi k xi + s_k sin 2 pi k xi
//   periodic.sin = []
//   periodic.mean = 0           constant term removed before solving; added back to energies
//   compact.kind = poschl_teller
//   compact.params = [2, 1, 2]
//   compact.x0 = 10
//   run.eps = [0.1, 0.05]
//   run.bands = [1]             finite lacunas to analyse (bands: edge table up to max)
//   run.order = 4
//   run.oracle = on
//   run.tolerance = 1e-10       identity tolerance for verify
//   output.format = csv
//   output.path = results.csv

#include <string>
#include <vector>

#include "lacuna/potentials.hpp"

namespace lacuna {

struct RunConfig {
  std::vector<double> periodic_cos, periodic_sin;
  double periodic_mean = 0.0;
  std::string compact_kind;  // empty: no compact potential given
  std::vector<double> compact_params;
  double compact_x0 = 0.0;
  std::vector<double> eps;
  std::vector<int> bands;
  int order = 4;
  bool oracle = true;
  double tolerance = 1e-10;
  std::string format = "csv";
  std::string out;

  bool has_periodic() const { return !periodic_cos.empty() || !periodic_sin.empty() || periodic_mean != 0.0; }
  bool has_compact() const { return !compact_kind.empty(); }
  bool operator==(const RunConfig&) const = default;

  // zero-mean part of the background and the removed mean (the energy shift)
  PeriodicPotential periodic() const;
  double energy_shift() const { return periodic_mean; }
  CompactPotential compact() const;
};

// Throws ConfigError with a "line N:" prefix on malformed input or out-of-range values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string emit_config(const RunConfig& c);

// Checks positivity of eps and tolerance, the format name and the potential parameters.
void validate(const RunConfig& c);

}  // namespace lacuna
