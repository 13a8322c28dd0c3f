// SPDX-License-Identifier: Apache-2.0
#include "wnls/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "wnls/trace.hpp"

namespace wnls {
namespace {

using Cfg = ExperimentConfig;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(std::string_view(s).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_real(const std::string& s) {
  double x = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto r = std::from_chars(b, e, x);
  if (r.ec != std::errc() || r.ptr != e || s.empty()) return std::nullopt;
  return x;
}

std::optional<std::uint64_t> to_uint(const std::string& s) {
  std::uint64_t x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return x;
}

std::optional<long> to_int(const std::string& s) {
  long x = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return x;
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

// A key parses its text into the config (returning an error message or "")
// and prints the current value canonically.
struct Key {
  std::string name;
  std::function<std::string(Cfg&, const std::string&)> parse;
  std::function<std::string(const Cfg&)> print;
};

Key real_key(std::string name, std::function<double&(Cfg&)> ref) {
  return {name,
          [ref](Cfg& c, const std::string& v) -> std::string {
            const auto x = to_real(v);
            if (!x) return "expected a real number, got '" + v + "'";
            ref(c) = *x;
            return "";
          },
          [ref](const Cfg& c) { return format_double(ref(const_cast<Cfg&>(c))); }};
}

Key opt_real_key(std::string name, std::function<std::optional<double>&(Cfg&)> ref) {
  return {name,
          [ref](Cfg& c, const std::string& v) -> std::string {
            if (v == "none") {
              ref(c).reset();
              return "";
            }
            const auto x = to_real(v);
            if (!x) return "expected a real number or 'none', got '" + v + "'";
            ref(c) = *x;
            return "";
          },
          [ref](const Cfg& c) {
            const auto& o = ref(const_cast<Cfg&>(c));
            return o ? format_double(*o) : std::string("none");
          }};
}

template <class T>
Key uint_key(std::string name, std::function<T&(Cfg&)> ref) {
  return {name,
          [ref](Cfg& c, const std::string& v) -> std::string {
            const auto x = to_uint(v);
            if (!x) return "expected a nonnegative integer, got '" + v + "'";
            ref(c) = static_cast<T>(*x);
            return "";
          },
          [ref](const Cfg& c) { return std::to_string(ref(const_cast<Cfg&>(c))); }};
}

Key int_key(std::string name, std::function<int&(Cfg&)> ref) {
  return {name,
          [ref](Cfg& c, const std::string& v) -> std::string {
            const auto x = to_int(v);
            if (!x) return "expected an integer, got '" + v + "'";
            ref(c) = static_cast<int>(*x);
            return "";
          },
          [ref](const Cfg& c) { return std::to_string(ref(const_cast<Cfg&>(c))); }};
}

Key bool_key(std::string name, std::function<bool&(Cfg&)> ref) {
  return {name,
          [ref](Cfg& c, const std::string& v) -> std::string {
            if (v == "true") ref(c) = true;
            else if (v == "false") ref(c) = false;
            else return "expected true or false, got '" + v + "'";
            return "";
          },
          [ref](const Cfg& c) { return std::string(ref(const_cast<Cfg&>(c)) ? "true" : "false"); }};
}

Key string_key(std::string name, std::function<std::string&(Cfg&)> ref, std::set<std::string> allowed = {}) {
  return {name,
          [ref, allowed](Cfg& c, const std::string& v) -> std::string {
            if (!allowed.empty() && !allowed.count(v)) {
              std::string opts;
              for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
              return "expected one of {" + opts + "}, got '" + v + "'";
            }
            ref(c) = v;
            return "";
          },
          [ref](const Cfg& c) { return ref(const_cast<Cfg&>(c)); }};
}

Key vec3_key(std::string name, std::function<std::array<double, 3>&(Cfg&)> ref) {
  return {name,
          [ref](Cfg& c, const std::string& v) -> std::string {
            const auto parts = split(v, ',');
            if (parts.empty() || parts.size() > 3) return "expected 1 to 3 comma-separated reals";
            std::array<double, 3> out{0, 0, 0};
            for (std::size_t i = 0; i < parts.size(); ++i) {
              const auto x = to_real(parts[i]);
              if (!x) return "expected a real number, got '" + parts[i] + "'";
              out[i] = *x;
            }
            ref(c) = out;
            return "";
          },
          [ref](const Cfg& c) {
            const auto& a = ref(const_cast<Cfg&>(c));
            return join_reals({a[0], a[1], a[2]});
          }};
}

Key initial_kind_key(std::string name, std::function<InitialKind&(Cfg&)> ref) {
  return {name,
          [ref](Cfg& c, const std::string& v) -> std::string {
            for (InitialKind k : {InitialKind::Zero, InitialKind::Gaussian, InitialKind::Ring, InitialKind::File}) {
              if (v == to_string(k)) {
                ref(c) = k;
                return "";
              }
            }
            return "expected one of {zero, gaussian, ring, file}, got '" + v + "'";
          },
          [ref](const Cfg& c) { return std::string(to_string(ref(const_cast<Cfg&>(c)))); }};
}

void add_initial_keys(std::vector<Key>& keys, const std::string& prefix, InitialSpec Cfg::*member) {
  keys.push_back(initial_kind_key(prefix + ".kind", [member](Cfg& c) -> InitialKind& { return (c.*member).kind; }));
  keys.push_back(real_key(prefix + ".amplitude", [member](Cfg& c) -> double& { return (c.*member).amplitude; }));
  keys.push_back(real_key(prefix + ".width", [member](Cfg& c) -> double& { return (c.*member).width; }));
  keys.push_back(vec3_key(prefix + ".center", [member](Cfg& c) -> std::array<double, 3>& { return (c.*member).center; }));
  keys.push_back(vec3_key(prefix + ".velocity", [member](Cfg& c) -> std::array<double, 3>& { return (c.*member).velocity; }));
  keys.push_back(real_key(prefix + ".chirp", [member](Cfg& c) -> double& { return (c.*member).chirp; }));
  keys.push_back(real_key(prefix + ".radius", [member](Cfg& c) -> double& { return (c.*member).radius; }));
  keys.push_back(string_key(prefix + ".path", [member](Cfg& c) -> std::string& { return (c.*member).path; }));
  keys.push_back(real_key(prefix + ".noise", [member](Cfg& c) -> double& { return (c.*member).noise; }));
}

const std::vector<std::pair<std::string, bool FunctionalSelection::*>>& functional_names() {
  static const std::vector<std::pair<std::string, bool FunctionalSelection::*>> names = {
      {"conserved", &FunctionalSelection::conserved}, {"virial", &FunctionalSelection::virial},
      {"pseudoconformal", &FunctionalSelection::pseudoconformal}, {"morawetz", &FunctionalSelection::morawetz},
      {"l4", &FunctionalSelection::l4}, {"sc_norm", &FunctionalSelection::sc_norm},
      {"focusing", &FunctionalSelection::focusing}};
  return names;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(real_key("params.alpha", [](Cfg& c) -> double& { return c.params.alpha; }));
    k.push_back(real_key("params.beta", [](Cfg& c) -> double& { return c.params.beta; }));
    k.push_back(real_key("params.lambda", [](Cfg& c) -> double& { return c.params.lambda; }));
    k.push_back(real_key("params.mu", [](Cfg& c) -> double& { return c.params.mu; }));
    k.push_back(bool_key("params.allow_sign_mismatch", [](Cfg& c) -> bool& { return c.params.allow_sign_mismatch; }));
    k.push_back(int_key("grid.d", [](Cfg& c) -> int& { return c.grid.d; }));
    k.push_back(uint_key<std::size_t>("grid.n", [](Cfg& c) -> std::size_t& { return c.grid.n; }));
    k.push_back(real_key("grid.L", [](Cfg& c) -> double& { return c.grid.L; }));
    add_initial_keys(k, "initial.u", &Cfg::initial_u);
    add_initial_keys(k, "initial.v", &Cfg::initial_v);
    k.push_back(uint_key<std::uint64_t>("initial.seed", [](Cfg& c) -> std::uint64_t& { return c.seed; }));
    k.push_back(real_key("stepper.dt", [](Cfg& c) -> double& { return c.stepper.dt; }));
    k.push_back(real_key("stepper.t_end", [](Cfg& c) -> double& { return c.stepper.t_end; }));
    k.push_back(bool_key("stepper.adapt", [](Cfg& c) -> bool& { return c.stepper.adapt; }));
    k.push_back(real_key("stepper.energy_tol", [](Cfg& c) -> double& { return c.stepper.energy_tol; }));
    k.push_back(real_key("stepper.min_dt", [](Cfg& c) -> double& { return c.stepper.min_dt; }));
    k.push_back(real_key("stepper.blowup_h1_threshold", [](Cfg& c) -> double& { return c.stepper.blowup_h1_threshold; }));
    k.push_back(real_key("stepper.spectral_tail_tol", [](Cfg& c) -> double& { return c.stepper.spectral_tail_tol; }));
    k.push_back(real_key("stepper.boundary_mass_tol", [](Cfg& c) -> double& { return c.stepper.boundary_mass_tol; }));
    k.push_back(bool_key("stepper.allow_non_gradient", [](Cfg& c) -> bool& { return c.stepper.allow_non_gradient; }));
    k.push_back(uint_key<std::size_t>("diagnostics.every", [](Cfg& c) -> std::size_t& { return c.diagnostics.every; }));
    k.push_back({"diagnostics.functionals",
                 [](Cfg& c, const std::string& v) -> std::string {
                   FunctionalSelection sel;
                   sel.conserved = false;
                   for (const std::string& item : split(v, ',')) {
                     bool found = false;
                     for (const auto& [name, member] : functional_names()) {
                       if (item == name) {
                         sel.*member = true;
                         found = true;
                       }
                     }
                     if (!found) return "unknown functional '" + item + "'";
                   }
                   c.diagnostics.functionals = sel;
                   return "";
                 },
                 [](const Cfg& c) {
                   std::string out;
                   for (const auto& [name, member] : functional_names())
                     if (c.diagnostics.functionals.*member) out += (out.empty() ? "" : ",") + name;
                   return out;
                 }});
    k.push_back({"diagnostics.sample_times",
                 [](Cfg& c, const std::string& v) -> std::string {
                   c.diagnostics.sample_times.clear();
                   c.diagnostics.geometric.reset();
                   if (v.rfind("geometric:", 0) == 0) {
                     const auto parts = split(v.substr(10), ',');
                     if (parts.size() != 3) return "expected geometric:start,ratio,count";
                     const auto s = to_real(parts[0]), r = to_real(parts[1]);
                     const auto n = to_uint(parts[2]);
                     if (!s || !r || !n) return "expected geometric:start,ratio,count";
                     c.diagnostics.geometric = GeometricTimes{*s, *r, static_cast<std::size_t>(*n)};
                     return "";
                   }
                   for (const std::string& item : split(v, ',')) {
                     const auto x = to_real(item);
                     if (!x) return "expected a real number, got '" + item + "'";
                     c.diagnostics.sample_times.push_back(*x);
                   }
                   return "";
                 },
                 [](const Cfg& c) {
                   if (const auto& g = c.diagnostics.geometric)
                     return "geometric:" + format_double(g->start) + "," + format_double(g->ratio) + "," +
                            std::to_string(g->count);
                   return join_reals(c.diagnostics.sample_times);
                 }});
    k.push_back(string_key("diagnostics.scattering_norm", [](Cfg& c) -> std::string& { return c.diagnostics.scattering_norm; },
                           {"none", "H1", "Sigma", "Hs"}));
    k.push_back(real_key("diagnostics.scattering_tol", [](Cfg& c) -> double& { return c.diagnostics.scattering_tol; }));
    k.push_back(uint_key<std::size_t>("diagnostics.scattering_k", [](Cfg& c) -> std::size_t& { return c.diagnostics.scattering_k; }));
    k.push_back(string_key("scenario.kind", [](Cfg& c) -> std::string& { return c.scenario.kind; }, {"single", "scan"}));
    k.push_back(bool_key("scenario.expect_blowup", [](Cfg& c) -> bool& { return c.scenario.expect_blowup; }));
    k.push_back(opt_real_key("scenario.max_energy_drift", [](Cfg& c) -> std::optional<double>& { return c.scenario.max_energy_drift; }));
    k.push_back(string_key("output.dir", [](Cfg& c) -> std::string& { return c.output.dir; }));
    k.push_back({"output.formats",
                 [](Cfg& c, const std::string& v) -> std::string {
                   c.output.csv = c.output.json = false;
                   for (const std::string& item : split(v, ',')) {
                     if (item == "csv") c.output.csv = true;
                     else if (item == "json") c.output.json = true;
                     else return "unknown output format '" + item + "'";
                   }
                   return "";
                 },
                 [](const Cfg& c) {
                   std::string out;
                   if (c.output.csv) out += "csv";
                   if (c.output.json) out += out.empty() ? "json" : ",json";
                   return out;
                 }});
    k.push_back(uint_key<std::size_t>("output.checkpoint_every", [](Cfg& c) -> std::size_t& { return c.output.checkpoint_every; }));
    k.push_back(bool_key("output.checkpoint_final", [](Cfg& c) -> bool& { return c.output.checkpoint_final; }));
    k.push_back({"scan.cells",
                 [](Cfg& c, const std::string& v) -> std::string {
                   c.scan_cells.clear();
                   for (const std::string& item : split(v, ',')) {
                     const auto parts = split(item, ':');
                     if (parts.size() != 2) return "expected alpha:beta, got '" + item + "'";
                     const auto a = to_real(parts[0]), b = to_real(parts[1]);
                     if (!a || !b) return "expected alpha:beta, got '" + item + "'";
                     c.scan_cells.emplace_back(*a, *b);
                   }
                   return "";
                 },
                 [](const Cfg& c) {
                   std::string out;
                   for (const auto& [a, b] : c.scan_cells)
                     out += (out.empty() ? "" : ",") + format_double(a) + ":" + format_double(b);
                   return out;
                 }});
    return k;
  }();
  return table;
}

bool seven_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u})
    while (n > 0 && n % p == 0) n /= p;
  return n == 1;
}

void validate(const Cfg& c, const std::map<std::string, std::size_t>& lines, std::vector<ConfigError>& errors) {
  auto err = [&](const std::string& key, const std::string& msg) {
    const auto it = lines.find(key);
    errors.push_back({it == lines.end() ? 0 : it->second, key + ": " + msg});
  };
  for (const char* key : {"params.alpha", "params.beta", "params.lambda", "params.mu"})
    if (!lines.count(key)) errors.push_back({0, std::string(key) + ": mandatory parameter missing"});

  const SystemParams& p = c.params;
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) err("params.alpha", "constraint violated: alpha ≥ 0");
  if (!(p.beta >= 0.0) || !std::isfinite(p.beta)) err("params.beta", "constraint violated: beta ≥ 0");
  if ((p.lambda == 0.0) != (p.mu == 0.0)) err("params.mu", "constraint violated: lambda and mu both nonzero or both zero");
  if (!p.allow_sign_mismatch && p.lambda * p.mu < 0.0)
    err("params.mu", "constraint violated: lambda and mu must share a sign (set params.allow_sign_mismatch)");
  if (c.grid.d < 1 || c.grid.d > 3) err("grid.d", "constraint violated: 1 ≤ d ≤ 3");
  if (c.grid.n < 8 || c.grid.n % 2 != 0 || !seven_smooth(c.grid.n))
    err("grid.n", "constraint violated: n ≥ 8, even, no prime factor above 7");
  if (!(c.grid.L > 0.0) || !std::isfinite(c.grid.L)) err("grid.L", "constraint violated: L > 0");
  for (const auto& [prefix, spec] : {std::pair<std::string, const InitialSpec*>{"initial.u", &c.initial_u},
                                     std::pair<std::string, const InitialSpec*>{"initial.v", &c.initial_v}}) {
    if (spec->kind == InitialKind::Gaussian || spec->kind == InitialKind::Ring) {
      if (!(spec->width > 0.0)) err(prefix + ".width", "constraint violated: width > 0");
      if (!std::isfinite(spec->amplitude)) err(prefix + ".amplitude", "constraint violated: finite amplitude");
    }
    if (spec->kind == InitialKind::Ring && !(spec->radius >= 0.0)) err(prefix + ".radius", "constraint violated: radius ≥ 0");
    if (spec->kind == InitialKind::File && spec->path.empty()) err(prefix + ".path", "required when kind = file");
    if (!(spec->noise >= 0.0)) err(prefix + ".noise", "constraint violated: noise ≥ 0");
  }
  const StepperConfig& s = c.stepper;
  if (!(s.dt > 0.0)) err("stepper.dt", "constraint violated: dt > 0");
  if (s.t_end == 0.0 || !std::isfinite(s.t_end)) err("stepper.t_end", "constraint violated: t_end ≠ 0");
  if (!(s.blowup_h1_threshold > 1.0)) err("stepper.blowup_h1_threshold", "constraint violated: threshold > 1");
  if (!(s.spectral_tail_tol > 0.0)) err("stepper.spectral_tail_tol", "constraint violated: tolerance > 0");
  if (!(s.boundary_mass_tol > 0.0)) err("stepper.boundary_mass_tol", "constraint violated: tolerance > 0");
  if (!(s.min_dt > 0.0)) err("stepper.min_dt", "constraint violated: min_dt > 0");
  if (!(s.energy_tol > 0.0)) err("stepper.energy_tol", "constraint violated: energy_tol > 0");
  if (const auto& g = c.diagnostics.geometric) {
    if (!(g->start > 0.0) || !(g->ratio > 1.0) || g->count == 0)
      err("diagnostics.sample_times", "constraint violated: start > 0, ratio > 1, count ≥ 1");
  }
  if (c.diagnostics.functionals.morawetz && c.grid.d != 3) err("diagnostics.functionals", "morawetz requires grid.d = 3");
  if (c.diagnostics.scattering_k == 0) err("diagnostics.scattering_k", "constraint violated: k ≥ 1");
  if (!(c.diagnostics.scattering_tol > 0.0)) err("diagnostics.scattering_tol", "constraint violated: tolerance > 0");
  if (c.scenario.kind == "scan" && c.scan_cells.empty()) err("scan.cells", "a scan needs at least one cell");
  for (const auto& [a, b] : c.scan_cells)
    if (!(a >= 0.0) || !(b >= 0.0)) err("scan.cells", "constraint violated: exponents ≥ 0");
  if (c.output.dir.empty()) err("output.dir", "must not be empty");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Key& k : keys()) out.push_back(k.name);
    return out;
  }();
  return names;
}

ParseResult parse_config(const std::string& text) {
  ParseResult res;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      res.errors.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
    if (it == table.end()) {
      res.errors.push_back({line_no, "unknown key '" + key + "'"});
      continue;
    }
    if (seen.count(key)) {
      res.errors.push_back({line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(seen[key]) + ")"});
      continue;
    }
    seen[key] = line_no;
    const std::string msg = it->parse(res.config, value);
    if (!msg.empty()) res.errors.push_back({line_no, key + ": " + msg});
  }
  res.config.params.d = res.config.grid.d;
  validate(res.config, seen, res.errors);
  std::stable_sort(res.errors.begin(), res.errors.end(),
                   [](const ConfigError& a, const ConfigError& b) { return a.line < b.line; });
  return res;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  std::string section;
  for (const Key& k : keys()) {
    const std::string top = k.name.substr(0, k.name.find('.'));
    if (top != section) {
      if (!section.empty()) out += '\n';
      section = top;
    }
    const std::string value = k.print(cfg);
    out += value.empty() ? k.name + " =\n" : k.name + " = " + value + "\n";
  }
  return out;
}

std::string format_errors(const std::vector<ConfigError>& errors) {
  std::string out;
  for (const ConfigError& e : errors)
    out += (e.line ? "line " + std::to_string(e.line) + ": " : std::string("config: ")) + e.message + "\n";
  return out;
}

}  // namespace wnls
