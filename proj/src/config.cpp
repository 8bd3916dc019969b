#include "lacuna/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lacuna {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double to_number(const std::string& tok, int line) {
  std::string t = trim(tok);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) fail(line, "expected a number, got '" + t + "'");
  if (!std::isfinite(v)) fail(line, "non-finite number '" + t + "'");
  return v;
}

std::vector<double> to_list(const std::string& val, int line) {
  std::string v = trim(val);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') fail(line, "expected a list [a, b, ...]");
  std::string body = trim(v.substr(1, v.size() - 2));
  std::vector<double> out;
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_number(item, line));
  if (!body.empty() && body.back() == ',') fail(line, "trailing comma in list");
  return out;
}

int to_int(double v, int line) {
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(line, "expected an integer");
  return static_cast<int>(v);
}

bool to_switch(const std::string& v, int line) {
  if (v == "on" || v == "true") return true;
  if (v == "off" || v == "false") return false;
  fail(line, "expected on or off, got '" + v + "'");
}

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, p);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

}  // namespace

PeriodicPotential RunConfig::periodic() const {
  return normalize_zero_mean(periodic_mean, periodic_cos, periodic_sin).first;
}

CompactPotential RunConfig::compact() const {
  if (!has_compact()) throw ConfigError("no compact potential configured (compact.kind)");
  return CompactPotential(compact_kind_from_string(compact_kind), compact_params, compact_x0);
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::map<std::string, int> seen;
  std::stringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "missing key");
    if (seen.count(key)) fail(line, "duplicate key '" + key + "' (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = line;
    if (key == "periodic.cos") c.periodic_cos = to_list(val, line);
    else if (key == "periodic.sin") c.periodic_sin = to_list(val, line);
    else if (key == "periodic.mean") c.periodic_mean = to_number(val, line);
    else if (key == "compact.kind") {
      try {
        compact_kind_from_string(val);
      } catch (const ConfigError& e) {
        fail(line, e.what());
      }
      c.compact_kind = val;
    } else if (key == "compact.params") c.compact_params = to_list(val, line);
    else if (key == "compact.x0") c.compact_x0 = to_number(val, line);
    else if (key == "run.eps") {
      c.eps = to_list(val, line);
      for (double e : c.eps)
        if (!(e > 0)) fail(line, "eps values must be strictly positive");
    } else if (key == "run.bands") {
      c.bands.clear();
      for (double b : to_list(val, line)) {
        int n = to_int(b, line);
        if (n < 0) fail(line, "band indices must be >= 0");
        c.bands.push_back(n);
      }
    } else if (key == "run.order") {
      c.order = to_int(to_number(val, line), line);
      if (c.order < 0) fail(line, "order must be >= 0");
    } else if (key == "run.oracle") c.oracle = to_switch(val, line);
    else if (key == "run.tolerance") {
      c.tolerance = to_number(val, line);
      if (!(c.tolerance > 0)) fail(line, "tolerance must be positive");
    } else if (key == "output.format") {
      if (val != "csv" && val != "json") fail(line, "output.format must be csv or json");
      c.format = val;
    } else if (key == "output.path") c.out = val;
    else fail(line, "unknown key '" + key + "'");
  }
  if (seen.count("compact.kind")) {
    if (!seen.count("compact.x0")) throw ConfigError("compact.x0 is required with compact.kind");
    if (!(c.compact_x0 > 0)) fail(seen["compact.x0"], "compact.x0 must be positive");
    try {
      c.compact();
    } catch (const ConfigError& e) {
      fail(seen["compact.kind"], e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "periodic.cos = " << fmt_list(c.periodic_cos) << "\n";
  os << "periodic.sin = " << fmt_list(c.periodic_sin) << "\n";
  os << "periodic.mean = " << fmt(c.periodic_mean) << "\n";
  if (c.has_compact()) {
    os << "compact.kind = " << c.compact_kind << "\n";
    os << "compact.params = " << fmt_list(c.compact_params) << "\n";
    os << "compact.x0 = " << fmt(c.compact_x0) << "\n";
  }
  os << "run.eps = " << fmt_list(c.eps) << "\n";
  std::vector<double> b(c.bands.begin(), c.bands.end());
  os << "run.bands = " << fmt_list(b) << "\n";
  os << "run.order = " << c.order << "\n";
  os << "run.oracle = " << (c.oracle ? "on" : "off") << "\n";
  os << "run.tolerance = " << fmt(c.tolerance) << "\n";
  os << "output.format = " << c.format << "\n";
  if (!c.out.empty()) os << "output.path = " << c.out << "\n";
  return os.str();
}

void validate(const RunConfig& c) {
  for (double e : c.eps)
    if (!(e > 0)) throw ConfigError("eps values must be strictly positive");
  if (!(c.tolerance > 0)) throw ConfigError("tolerance must be positive");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
  if (c.order < 0) throw ConfigError("order must be >= 0");
  if (c.has_periodic()) c.periodic();
  if (c.has_compact()) support_radius(c.compact());
}

}  // namespace lacuna
