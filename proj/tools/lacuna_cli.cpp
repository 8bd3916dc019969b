// lacuna: band edges, impurity levels and resonance data for -d^2/dx^2 + V(x) + a(x/eps).
//
//   lacuna bands     --config c.txt --eps 0.1,0.05 [--order 4] [--oracle on|off]
//   lacuna levels    --config c.txt [--eps ...]
//   lacuna resonance --config c.txt [--eps ...]
//   lacuna verify    [--config c.txt] [--criteria 1,4]
//
// Exit codes: 0 success, 1 acceptance failure, 2 configuration or usage error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lacuna/acceptance.hpp"
#include "lacuna/cell_ops.hpp"
#include "lacuna/config.hpp"
#include "lacuna/finite_lacuna.hpp"
#include "lacuna/floquet.hpp"
#include "lacuna/h0.hpp"
#include "lacuna/oracle.hpp"
#include "lacuna/semi_lacuna.hpp"

using json = nlohmann::ordered_json;
using namespace lacuna;

namespace {

constexpr double pi = std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rows share one column list; missing cells are null in JSON and empty in CSV.
struct Report {
  std::string command;
  double energy_shift = 0.0;
  std::vector<std::string> columns;
  std::vector<json> rows;
  std::vector<std::string> notes;

  json& add() {
    rows.emplace_back(json::object());
    return rows.back();
  }
};

json num(double v) { return std::isfinite(v) ? json(v + 0.0) : json(nullptr); }  // + 0.0 drops the sign of -0

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.get<double>() + 0.0);  // shortest round-trip
    return std::string(buf, end);
  }
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string render(const Report& r, const std::string& format) {
  if (format == "json") {
    json doc;
    doc["command"] = r.command;
    doc["energy_shift"] = r.energy_shift;
    doc["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) {
      json o = json::object();
      for (const auto& c : r.columns) o[c] = row.contains(c) ? row[c] : json(nullptr);
      rows.push_back(o);
    }
    doc["rows"] = rows;
    doc["notes"] = r.notes;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& n : r.notes) os << "# " << n << "\n";
  for (size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << "\n";
  for (const auto& row : r.rows) {
    for (size_t i = 0; i < r.columns.size(); ++i) {
      const auto& c = r.columns[i];
      os << (i ? "," : "") << (row.contains(c) ? csv_cell(row[c]) : "");
    }
    os << "\n";
  }
  return os.str();
}

std::vector<double> parse_eps_list(const std::string& s) {
  RunConfig tmp = parse_config("run.eps = [" + s + "]");
  return tmp.eps;
}

void require_periodic(const RunConfig& c) {
  if (!c.has_periodic()) throw ConfigError("periodic.cos / periodic.sin are required for this command");
}
void require_compact(const RunConfig& c) {
  if (!c.has_compact()) throw ConfigError("compact.kind, compact.params and compact.x0 are required for this command");
}
void require_eps(const RunConfig& c, const std::string& cmd) {
  if (c.eps.empty()) throw UsageError(cmd + ": no eps values (use --eps or run.eps)");
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v[i]);
    os << (i ? " " : "") << std::string_view(buf, end - buf);
  }
  return os.str();
}

// ----------------------------------------------------------------------------------------- bands

Report cmd_bands(const RunConfig& c) {
  require_periodic(c);
  require_eps(c, "bands");
  Report r{"bands", c.energy_shift(), {}, {}, {}};
  r.columns = {"band", "side", "eps", "order", "first_index", "coefficients", "series_energy", "series_energy_shifted",
               "truncation_estimate"};
  if (c.oracle)
    for (const char* k : {"numeric_energy", "numeric_energy_shifted", "series_minus_numeric", "gap_width"})
      r.columns.push_back(k);
  r.columns.push_back("note");
  auto a = c.periodic();
  int n_max = 3;
  if (!c.bands.empty()) n_max = *std::max_element(c.bands.begin(), c.bands.end());
  for (int n = 0; n <= n_max; ++n) {
    std::vector<Side> sides = n == 0 ? std::vector<Side>{Side::Plus} : std::vector<Side>{Side::Minus, Side::Plus};
    BandEdgeSeries zero;
    EdgePair pair;
    std::string note;
    bool have_series = true;
    if (n == 0) {
      if (c.order >= 1) zero = edge_series_zero(a, c.order);
      else {
        have_series = false;
        note = "series for the lowest edge starts at index 1; order 0 leaves no coefficients";
      }
    } else {
      try {
        pair = edge_series_n(a, n, c.order);
        if (pair.lacuna.collapsed) note = "gap collapsed to all computed orders";
      } catch (const std::exception& e) {
        have_series = false;
        note = e.what();
      }
    }
    for (Side s : sides) {
      const BandEdgeSeries* ser = n == 0 ? &zero : &pair.series(s);
      std::vector<double> coeffs;
      if (have_series)
        for (int i = ser->first_index; i <= std::min(c.order, ser->order()); ++i) coeffs.push_back(ser->coeff(i));
      for (double eps : c.eps) {
        json& row = r.add();
        row["band"] = n;
        row["side"] = to_string(s);
        row["eps"] = eps;
        row["order"] = c.order;
        row["first_index"] = n == 0 ? 1 : 0;
        row["coefficients"] = join(coeffs);
        double value = NAN;
        if (have_series) {
          value = ser->edge_value(eps, c.order);
          // size of the last nonzero retained term
          int last = std::min(c.order, ser->order());
          while (last > ser->first_index && ser->coeff(last) == 0.0) --last;
          row["truncation_estimate"] = num(std::abs(ser->coeff(last)) * std::pow(eps * eps, last));
        }
        row["series_energy"] = num(value);
        row["series_energy_shifted"] = num(value + c.energy_shift());
        if (c.oracle) {
          auto e = band_edges_numeric(a, eps, n);
          double v = (n == 0 || s == Side::Plus) ? e.upper_lambda(eps) : e.lower_lambda(eps);
          row["numeric_energy"] = num(v);
          row["numeric_energy_shifted"] = num(v + c.energy_shift());
          // difference in the offset variable keeps precision at small eps
          if (have_series) {
            double nu = (n == 0 || s == Side::Plus) ? e.upper.nu : e.lower.nu;
            row["series_minus_numeric"] = num(ser->edge_offset(eps, c.order) - nu);
          }
          if (n > 0) row["gap_width"] = num(e.upper.nu - e.lower.nu);
          if (!e.note.empty()) note += (note.empty() ? "" : "; ") + e.note;
        }
        row["note"] = note;
      }
    }
  }
  r.notes.push_back("energies are for the zero-mean background; *_shifted columns add the removed mean");
  r.notes.push_back("coefficients multiply eps^(2j) for j = first_index, first_index + 1, ...");
  return r;
}

// ---------------------------------------------------------------------------------------- levels

void fill_fit(Report& r, size_t first, const std::vector<std::pair<double, double>>& errs, double scale) {
  if (errs.size() < 2) return;
  auto f = fit_convergence_order(errs, 1e-14 * std::max(1.0, std::abs(scale)));
  for (size_t i = first; i < r.rows.size(); ++i) {
    r.rows[i]["fitted_order"] = num(f.order);
    if (f.saturated) r.rows[i]["note"] = f.note;
  }
}

Report cmd_levels(const RunConfig& c) {
  require_periodic(c);
  require_compact(c);
  require_eps(c, "levels");
  Report r{"levels", c.energy_shift(), {}, {}, {}};
  r.columns = {"band", "side", "kind", "index", "status", "reason", "eps", "order", "series_energy",
               "series_energy_shifted", "tau2", "tau4"};
  if (c.oracle)
    for (const char* k : {"oracle_energy", "oracle_energy_shifted", "difference", "fitted_order"})
      r.columns.push_back(k);
  r.columns.push_back("note");
  auto a = c.periodic();
  auto V = c.compact();
  double shift = c.energy_shift();

  // semi-infinite lacuna: bound states, then the resonance level
  auto cnt = count_semi_lacuna(V, a);
  auto sp = discrete_spectrum(V);
  std::vector<OracleResult> semi_oracle;
  if (c.oracle)
    for (double eps : c.eps) semi_oracle.push_back(gap_eigenvalues(V, a, eps, 0));
  int bound_order = std::min(c.order, SemiLacunaOptions{}.max_bound_order);
  for (int k = 0; k < sp.count(); ++k) {
    auto e = bound_state_expansion(V, a, sp.states[k], bound_order);
    size_t first = r.rows.size();
    std::vector<std::pair<double, double>> errs;
    for (size_t j = 0; j < c.eps.size(); ++j) {
      double eps = c.eps[j];
      json& row = r.add();
      row["band"] = 0;
      row["side"] = "-";
      row["kind"] = "bound_state";
      row["index"] = sp.states[k].index;
      row["status"] = "exists";
      row["reason"] = "bound state of H_0";
      row["eps"] = eps;
      row["order"] = bound_order;
      double v = e.series.value(eps);
      row["series_energy"] = v;
      row["series_energy_shifted"] = v + shift;
      row["note"] = "";
      if (c.oracle) {
        const auto& o = semi_oracle[j];
        if (k < static_cast<int>(o.levels.size())) {
          double lam = o.levels[k].lambda;
          row["oracle_energy"] = lam;
          row["oracle_energy_shifted"] = lam + shift;
          row["difference"] = v - lam;
          errs.push_back({eps, std::abs(v - lam)});
        } else {
          row["note"] = "oracle found fewer levels than bound states";
        }
      }
    }
    fill_fit(r, first, errs, sp.states[k].lambda);
  }
  if (cnt.resonance != ResonanceStatus::Absent) {
    auto res = resonance_check(V);
    int ro = std::min(std::max(c.order, 8), SemiLacunaOptions{}.max_resonance_order);
    auto e = resonance_expansion(V, a, res, ro);
    for (double eps : c.eps) {
      json& row = r.add();
      row["band"] = 0;
      row["side"] = "-";
      row["kind"] = "resonance";
      row["index"] = 0;
      row["status"] = cnt.has_resonance_level ? "exists" : "marginal";
      row["reason"] = "zero-energy resonance of H_0";
      row["eps"] = eps;
      row["order"] = ro;
      double v = e.series.value(eps);
      row["series_energy"] = v;
      row["series_energy_shifted"] = v + shift;
      row["tau2"] = e.series.tau[2];
      row["tau4"] = e.series.tau[4];
      row["note"] = "depth O(eps^8) below the lowest edge; not resolved by the oracle";
    }
  }
  if (!cnt.warning.empty()) r.notes.push_back(cnt.warning);

  // finite lacunas
  std::vector<int> bands = c.bands.empty() ? std::vector<int>{1} : c.bands;
  std::sort(bands.begin(), bands.end());
  bands.erase(std::unique(bands.begin(), bands.end()), bands.end());
  for (int n : bands) {
    if (n == 0) continue;
    LacunaVerdict v;
    try {
      v = existence(V, a, n);
    } catch (const std::exception& ex) {
      json& row = r.add();
      row["band"] = n;
      row["kind"] = "edge";
      row["status"] = "unsupported";
      row["note"] = ex.what();
      continue;
    }
    std::vector<OracleResult> orc;
    if (c.oracle)
      for (double eps : c.eps) orc.push_back(gap_eigenvalues(V, a, eps, n));
    for (Side s : {Side::Minus, Side::Plus}) {
      bool lower = s == Side::Minus;
      LevelStatus st = lower ? v.lower : v.upper;
      VerdictReason why = lower ? v.lower_reason : v.upper_reason;
      std::optional<int> idx = lower ? v.deciding_index_minus : v.deciding_index_plus;
      EdgeExpansion ex;
      bool have = st == LevelStatus::Exists;
      if (have) ex = edge_expansion(V, a, n, s, c.order);
      size_t first = r.rows.size();
      std::vector<std::pair<double, double>> errs;
      for (size_t j = 0; j < c.eps.size(); ++j) {
        double eps = c.eps[j];
        json& row = r.add();
        row["band"] = n;
        row["side"] = to_string(s);
        row["kind"] = lower ? "edge_minus" : "edge_plus";
        row["index"] = n;
        row["status"] = to_string(st);
        row["reason"] = to_string(why) + (idx ? " (tau_" + std::to_string(*idx) + ")" : std::string());
        row["eps"] = eps;
        row["order"] = c.order;
        const auto& tau = lower ? v.tau_minus : v.tau_plus;
        if (tau.size() > 2) row["tau2"] = num(tau[2]);
        if (tau.size() > 4) row["tau4"] = num(tau[4]);
        row["note"] = v.note;
        double val = NAN;
        if (have) {
          val = level_value(ex, eps);
          row["series_energy"] = val;
          row["series_energy_shifted"] = val + shift;
        }
        if (c.oracle) {
          const OracleLevel* hit = nullptr;
          for (const auto& L : orc[j].levels) {
            bool near_lower = L.distance_to_lower < L.distance_to_upper;
            if (near_lower == lower) hit = &L;
          }
          if (hit) {
            row["oracle_energy"] = hit->lambda;
            row["oracle_energy_shifted"] = hit->lambda + shift;
            if (have) {
              row["difference"] = val - hit->lambda;
              errs.push_back({eps, std::abs(val - hit->lambda)});
            } else {
              row["note"] = "oracle level present although the verdict is " + to_string(st);
            }
          } else if (have) {
            row["note"] = "oracle found no level at this edge (depth may be below its resolution)";
          }
        }
      }
      fill_fit(r, first, errs, pi * pi * n * n / (c.eps.back() * c.eps.back()));
    }
  }
  r.notes.push_back("semi-infinite lacuna: " + std::to_string(cnt.count) + " level(s), " +
                    std::to_string(cnt.bound_states) + " from bound states, resonance " + to_string(cnt.resonance));
  return r;
}

// ------------------------------------------------------------------------------------- resonance

Report cmd_resonance(const RunConfig& c) {
  require_compact(c);
  Report r{"resonance", c.energy_shift(), {"quantity", "index", "eps", "value", "value_shifted"}, {}, {}};
  auto V = c.compact();
  auto res = resonance_check(V);
  auto put = [&](const std::string& q, json idx, json eps, json v, json vs = nullptr) {
    json& row = r.add();
    row["quantity"] = q;
    row["index"] = idx;
    row["eps"] = eps;
    row["value"] = v;
    row["value_shifted"] = vs;
  };
  put("status", nullptr, nullptr, to_string(res.status));
  put("residual", nullptr, nullptr, num(res.residual));
  put("beta_plus", nullptr, nullptr, num(res.beta_plus));
  put("beta_minus", nullptr, nullptr, num(res.beta_minus));
  put("bound_states", nullptr, nullptr, count_below(V, 0.0));
  put("dpsi_norm_sq", nullptr, nullptr, num(res.dpsi_norm_sq()));
  if (res.present() && c.has_periodic()) {
    auto a = c.periodic();
    int order = std::min(std::max(c.order, 8), SemiLacunaOptions{}.max_resonance_order);
    auto e = resonance_expansion(V, a, res, order);
    put("tau4_closed_form", 4, nullptr, num(tau4_resonance(a, res)));
    for (int i = 0; i <= order; ++i) put("lambda", i, nullptr, num(e.series.lambda[i]));
    for (int i = 0; i <= order; ++i) put("tau", i, nullptr, num(e.series.tau[i]));
    put("consistency", nullptr, nullptr, num(e.consistency));
    for (double eps : c.eps) {
      double v = e.series.value(eps);
      put("level_energy", nullptr, eps, num(v), num(v + c.energy_shift()));
    }
  } else if (res.present()) {
    r.notes.push_back("no periodic potential configured: coefficients skipped");
  }
  return r;
}

// ---------------------------------------------------------------------------------------- verify

Report cmd_verify(const RunConfig& c, const std::vector<int>& only, bool& ok) {
  Report r{"verify", c.energy_shift(), {"criterion", "name", "verdict", "seconds", "detail"}, {}, {}};
  AcceptanceOptions opt;
  opt.tolerance = c.tolerance;
  opt.only = only;
  auto res = run_acceptance(opt, [](const CriterionOutcome& o) {
    std::fprintf(stderr, "[%s] criterion %d (%.1f s)\n", to_string(o.verdict).c_str(), o.id, o.seconds);
  });
  for (const auto& o : res) {
    json& row = r.add();
    row["criterion"] = o.id;
    row["name"] = o.name;
    row["verdict"] = to_string(o.verdict);
    row["seconds"] = o.seconds;
    row["detail"] = o.detail;
  }
  ok = suite_passed(res);
  r.notes.push_back(ok ? "suite passed" : "suite FAILED");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral lacunas of -d^2/dx^2 + V(x) + a(x/eps)"};
  app.require_subcommand(1);
  std::string config_path, eps_list, oracle, format, out;
  int order = -1;
  std::vector<int> criteria;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--eps", eps_list, "comma-separated eps values");
    sub->add_option("--order", order, "series truncation order")->check(CLI::NonNegativeNumber);
    sub->add_option("--oracle", oracle, "numeric comparison")->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out, "output file (default stdout)");
  };
  auto* bands = app.add_subcommand("bands", "band edges: series and numeric");
  auto* levels = app.add_subcommand("levels", "impurity levels in the lacunas");
  auto* resonance = app.add_subcommand("resonance", "zero-energy resonance data");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  for (auto* s : {bands, levels, resonance, verify}) common(s);
  verify->add_option("--criteria", criteria, "subset of criteria to run")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) {
      c = load_config(config_path);
      if (c == RunConfig{}) throw UsageError("config '" + config_path + "' sets no keys");
    } else if (!verify->parsed()) {
      throw UsageError("--config is required");
    }
    if (!eps_list.empty()) c.eps = parse_eps_list(eps_list);
    if (order >= 0) c.order = order;
    if (!oracle.empty()) c.oracle = oracle == "on";
    if (!format.empty()) c.format = format;
    if (!out.empty()) c.out = out;
    validate(c);

    Report r;
    bool ok = true;
    if (bands->parsed()) r = cmd_bands(c);
    else if (levels->parsed()) r = cmd_levels(c);
    else if (resonance->parsed()) r = cmd_resonance(c);
    else r = cmd_verify(c, criteria, ok);

    std::string text = render(r, c.format);
    if (c.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(c.out);
      if (!f) throw ConfigError("cannot write '" + c.out + "'");
      f << text;
    }
    return ok ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
