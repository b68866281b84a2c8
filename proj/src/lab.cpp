#include "tunnellab/lab.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "tunnellab/observables.hpp"
#include "tunnellab/stationary.hpp"

namespace tl {

using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------- registry

struct ParamDef {
  std::string name;
  std::vector<double> def;
  bool list = false;
  std::function<std::string(double)> check;  // empty string when the value is acceptable
};

struct ScenarioDef {
  std::string name;
  std::string summary;
  PhysicalConfig base;
  std::vector<std::string> config_keys;
  bool auto_x0 = false;  // x0 = -k0 L / (2 q0) unless overridden
  std::vector<ParamDef> params;
  SweepAxis axis;
  std::function<std::string(double)> axis_check;
  std::function<void(const ScenarioSpec&)> validate;
};

std::string positive(double v) { return v > 0.0 && std::isfinite(v) ? "" : "must be finite and > 0"; }
std::string non_negative(double v) { return v >= 0.0 && std::isfinite(v) ? "" : "must be finite and >= 0"; }
std::string unit_open(double v) { return v > 0.0 && v < 1.0 ? "" : "must lie in (0, 1)"; }
std::string count_check(double v) {
  return v >= 1.0 && v <= 1000.0 && v == std::floor(v) ? "" : "must be an integer in [1, 1000]";
}
std::string any_finite(double v) { return std::isfinite(v) ? "" : "must be finite"; }

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PhysicalConfig field_config(double wa, double k0_over_w, double L) {
  PhysicalConfig c;
  c.m = 1.0;
  c.a = 1.0;
  c.V0 = 0.5 * wa * wa;
  c.L = L;
  c.k0 = k0_over_w * wa;
  return c;
}

void need_above_barrier(const ScenarioSpec& s) {
  if (!(s.config.k0 > s.config.w()))
    throw ConfigError("config: scenario " + s.name + " needs k0 > w = sqrt(2 m V0)");
  if (!(s.config.L > 0.0)) throw ConfigError("config: scenario " + s.name + " needs L > 0");
}

const std::vector<ScenarioDef>& registry() {
  static const std::vector<ScenarioDef> defs = [] {
    std::vector<ScenarioDef> d;
    const std::vector<std::string> field_keys{"m", "V0", "L", "a", "k0", "x0"};
    {
      ScenarioDef s;
      s.name = "free-packet";
      s.summary = "free Gaussian packet: quadrature against the closed form";
      s.base.m = 1.0;
      s.base.a = 1.0;
      s.base.k0 = 10.0;
      s.base.x0 = -10.0;
      s.base.L = 0.0;
      s.config_keys = {"m", "a", "k0", "x0"};
      s.params = {{"t_max", {2.0}, false, positive}, {"time_count", {5.0}, false, count_check}};
      s.axis = {"x", -20.0, 30.0, 501};
      s.axis_check = any_finite;
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "above-barrier-naive";
      s.summary = "single-peak stationary phase fields above the barrier and the phase derivative";
      s.base = field_config(1e4, std::sqrt(2.0), 5.0);
      s.config_keys = field_keys;
      s.auto_x0 = true;
      s.params = {{"time_count", {6.0}, false, count_check},
                  {"kw_min", {1.001}, false, [](double v) { return v > 1.0 ? "" : "must be > 1"; }},
                  {"kw_max", {4.0}, false, [](double v) { return v > 1.0 ? "" : "must be > 1"; }},
                  {"kw_steps", {500.0}, false,
                   [](double v) { return v >= 2.0 && v <= 1e6 && v == std::floor(v) ? "" : "must be an integer >= 2"; }}};
      s.axis = {"x", -40.0, 40.0, 2001};
      s.axis_check = any_finite;
      s.validate = [](const ScenarioSpec& sp) {
        need_above_barrier(sp);
        if (!(sp.params.at("kw_min")[0] < sp.params.at("kw_max")[0]))
          throw ConfigError("params: kw_min must be below kw_max");
      };
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "multipeak";
      s.summary = "multiple peak decomposition: individual terms and partial sums";
      s.base = field_config(1e4, std::sqrt(10.0) / 3.0, 5.0);
      s.config_keys = field_keys;
      s.auto_x0 = true;
      s.params = {{"time_count", {6.0}, false, count_check}, {"terms", {3.0}, false, count_check}};
      s.axis = {"x", -80.0, 80.0, 1601};
      s.axis_check = any_finite;
      s.validate = need_above_barrier;
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "confront";
      s.summary = "analytic multipeak partial sums against quadrature propagation";
      s.base = field_config(1e4, 5.0 * std::sqrt(2.0) / 7.0, 0.8);
      s.config_keys = field_keys;
      s.auto_x0 = true;
      s.params = {{"time_count", {6.0}, false, count_check}, {"terms", {3.0}, false, count_check}};
      s.axis = {"x", -35.0, 35.0, 701};
      s.axis_check = any_finite;
      s.validate = need_above_barrier;
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "table1";
      s.summary = "maximum of the transmitted spectrum k_max a over (w a, L/a)";
      s.base.m = 1.0;
      s.base.a = 1.0;
      s.base.k0 = 1.0;
      s.config_keys = {"m", "a", "k0"};
      s.params = {{"wa", {1.5, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0}, true, positive}};
      s.axis = {"L_over_a", 0.0, 1.0, 21};
      s.axis_check = non_negative;
      s.validate = [](const ScenarioSpec& sp) {
        for (double wa : sp.params.at("wa"))
          if (!(sp.config.k0 * sp.config.a < wa))
            throw ConfigError("params: every wa must exceed k0 a (tunneling spectrum)");
      };
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "nr-phase";
      s.summary = "one-way and symmetric-collision phase times t/tau versus opacity";
      s.params = {{"n", {0.25, 0.5, 0.75}, true, unit_open}};
      s.axis = {"alpha", 0.01, 6.0, 300};
      s.axis_check = positive;
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "symmetric-times";
      s.summary = "phase, dwell and self-interference times of the symmetric collision";
      s.params = {{"wL", {4.0 * pi}, false, positive}};
      s.axis = {"n", 0.005, 0.995, 199};
      s.axis_check = unit_open;
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "relativistic-times";
      s.summary = "Klein-Gordon tunneling: transmission, phase, dwell and self-interference times";
      s.params = {{"wL", {2.0 * pi}, false, positive}, {"upsilon", {0.0, 1.0, 2.0, 5.0, 10.0}, true, non_negative}};
      s.axis = {"zone_fraction", 0.0025, 0.9975, 200};
      s.axis_check = unit_open;
      d.push_back(s);
    }
    {
      ScenarioDef s;
      s.name = "hartman";
      s.summary = "phase time versus opacity and its saturation";
      s.params = {{"n", {0.25, 0.5, 0.75}, true, unit_open},
                  {"upsilon", {5.0}, false, positive},
                  {"rel_n_sq", {2.5}, true, positive},
                  {"tolerance", {1e-6}, false, positive}};
      s.axis = {"alpha", 0.05, 30.0, 300};
      s.axis_check = positive;
      s.validate = [](const ScenarioSpec& sp) {
        double u = sp.params.at("upsilon")[0];
        for (double n2 : sp.params.at("rel_n_sq"))
          if (rel_zone(n2, u) != RelZone::Tunneling)
            throw ConfigError("params: rel_n_sq must lie inside the tunneling zone (n^2 - upsilon/2)^2 < 1");
      };
      d.push_back(s);
    }
    return d;
  }();
  return defs;
}

const ScenarioDef& find_def(const std::string& name) {
  for (const auto& d : registry())
    if (d.name == name) return d;
  throw ScenarioError("unknown scenario '" + name + "' (see `tunnellab list`)");
}

// ---------------------------------------------------------------- config parsing

std::string line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

// Position of the key path in the source text, found by scanning for each quoted key in turn.
std::string locate(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const auto& key : path) {
    std::string quoted = "\"" + key + "\"";
    std::size_t at = pos;
    while (true) {
      at = text.find(quoted, at);
      if (at == std::string::npos) return "";
      std::size_t after = text.find_first_not_of(" \t\r\n", at + quoted.size());
      if (after != std::string::npos && text[after] == ':') break;
      at += quoted.size();
    }
    pos = at;
  }
  return line_col(text, pos) + ": ";
}

struct Parser {
  const std::string& text;

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::string dotted;
    for (const auto& p : path) dotted += (dotted.empty() ? "" : ".") + p;
    throw ConfigError(locate(text, path) + dotted + ": " + what);
  }

  double number(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  void only_keys(const json& obj, const std::set<std::string>& allowed, const std::vector<std::string>& path) const {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) {
        auto p = path;
        p.push_back(it.key());
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(p, "unknown key (allowed: " + (list.empty() ? std::string("none") : list) + ")");
      }
    }
  }
};

void set_config_key(PhysicalConfig& c, const std::string& key, double v) {
  if (key == "m") c.m = v;
  else if (key == "V0") c.V0 = v;
  else if (key == "L") c.L = v;
  else if (key == "a") c.a = v;
  else if (key == "k0") c.k0 = v;
  else if (key == "x0") c.x0 = v;
}

double get_config_key(const PhysicalConfig& c, const std::string& key) {
  if (key == "m") return c.m;
  if (key == "V0") return c.V0;
  if (key == "L") return c.L;
  if (key == "a") return c.a;
  if (key == "k0") return c.k0;
  return c.x0;
}

void fill_auto_x0(PhysicalConfig& c) {
  double w = c.w();
  if (c.k0 > w && c.L > 0.0) c.x0 = -c.k0 * c.L / (2.0 * std::sqrt((c.k0 - w) * (c.k0 + w)));
}

ScenarioSpec parse_impl(const std::string& text, const std::optional<std::string>& scenario) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    std::string msg = e.what();
    auto colon = msg.rfind(": ");
    throw ConfigError(line_col(text, off) + ": syntax error: " + (colon == std::string::npos ? msg : msg.substr(colon + 2)));
  }
  Parser P{text};
  if (!root.is_object()) throw ConfigError("1:1: config must be a JSON object");
  P.only_keys(root, {"scenario", "config", "params", "sweep", "output"}, {});

  std::string name;
  if (root.contains("scenario")) {
    if (!root["scenario"].is_string()) P.fail({"scenario"}, "expected a string");
    name = root["scenario"].get<std::string>();
    if (scenario && *scenario != name)
      P.fail({"scenario"}, "names '" + name + "' but the command line asks for '" + *scenario + "'");
  } else if (scenario) {
    name = *scenario;
  } else {
    throw ConfigError("1:1: missing key 'scenario'");
  }
  const ScenarioDef& def = find_def(name);

  ScenarioSpec s;
  s.name = name;
  s.config = def.base;
  s.axis = def.axis;
  s.output = name;

  bool x0_given = false;
  if (root.contains("config")) {
    const json& c = root["config"];
    if (!c.is_object()) P.fail({"config"}, "expected an object");
    P.only_keys(c, std::set<std::string>(def.config_keys.begin(), def.config_keys.end()), {"config"});
    for (auto it = c.begin(); it != c.end(); ++it) {
      set_config_key(s.config, it.key(), P.number(it.value(), {"config", it.key()}));
      if (it.key() == "x0") x0_given = true;
    }
  }
  try {
    s.config.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(locate(text, {"config"}) + "config: " + e.what());
  }
  if (def.auto_x0 && !x0_given) fill_auto_x0(s.config);

  for (const auto& p : def.params) s.params[p.name] = p.def;
  if (root.contains("params")) {
    const json& pj = root["params"];
    if (!pj.is_object()) P.fail({"params"}, "expected an object");
    std::set<std::string> allowed;
    for (const auto& p : def.params) allowed.insert(p.name);
    P.only_keys(pj, allowed, {"params"});
    for (const auto& p : def.params) {
      if (!pj.contains(p.name)) continue;
      const json& v = pj[p.name];
      std::vector<std::string> path{"params", p.name};
      std::vector<double> vals;
      if (v.is_array()) {
        if (!p.list) P.fail(path, "expected a single number");
        if (v.empty()) P.fail(path, "list must not be empty");
        for (const auto& e : v) vals.push_back(P.number(e, path));
      } else {
        vals.push_back(P.number(v, path));
      }
      for (double x : vals) {
        std::string err = p.check ? p.check(x) : "";
        if (!err.empty()) P.fail(path, err);
      }
      s.params[p.name] = vals;
    }
  }

  if (root.contains("sweep")) {
    const json& sj = root["sweep"];
    if (!sj.is_object()) P.fail({"sweep"}, "expected an object");
    P.only_keys(sj, {"parameter", "min", "max", "steps"}, {"sweep"});
    for (const char* k : {"parameter", "min", "max", "steps"})
      if (!sj.contains(k)) P.fail({"sweep"}, std::string("missing key '") + k + "'");
    if (!sj["parameter"].is_string()) P.fail({"sweep", "parameter"}, "expected a string");
    SweepAxis ax;
    ax.parameter = sj["parameter"].get<std::string>();
    if (ax.parameter != def.axis.parameter)
      P.fail({"sweep", "parameter"}, "scenario " + name + " sweeps '" + def.axis.parameter + "'");
    ax.min = P.number(sj["min"], {"sweep", "min"});
    ax.max = P.number(sj["max"], {"sweep", "max"});
    double steps = P.number(sj["steps"], {"sweep", "steps"});
    if (!(steps >= 2.0 && steps <= 1e7 && steps == std::floor(steps)))
      P.fail({"sweep", "steps"}, "must be an integer >= 2");
    ax.steps = static_cast<int>(steps);
    if (!(ax.min < ax.max)) P.fail({"sweep"}, "min must be below max");
    for (double v : {ax.min, ax.max}) {
      std::string err = def.axis_check ? def.axis_check(v) : "";
      if (!err.empty()) P.fail({"sweep"}, "bounds " + err);
    }
    s.sweep = ax;
    s.axis = ax;
  }

  if (root.contains("output")) {
    if (!root["output"].is_string() || root["output"].get<std::string>().empty())
      P.fail({"output"}, "expected a non-empty string");
    s.output = root["output"].get<std::string>();
  }

  if (def.validate) {
    try {
      def.validate(s);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  return s;
}

// ---------------------------------------------------------------- evaluation helpers

std::vector<std::vector<Cell>> parallel_rows(int n, const std::function<std::vector<Cell>(int)>& f) {
  std::vector<std::vector<Cell>> rows(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      rows[i] = f(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ScenarioError(e);
  return rows;
}

SpatialGrid axis_grid(const SweepAxis& ax) {
  double h = (ax.max - ax.min) / (ax.steps - 1);
  return SpatialGrid{ax.min, ax.min + h * ax.steps, ax.steps};
}

int int_param(const ScenarioSpec& s, const char* key) { return static_cast<int>(s.params.at(key)[0]); }

std::vector<std::pair<std::string, std::string>> provenance(const ScenarioSpec& s) {
  const ScenarioDef& def = find_def(s.name);
  std::vector<std::pair<std::string, std::string>> p;
  p.emplace_back("scenario", s.name);
  for (const auto& k : def.config_keys) p.emplace_back("config." + k, fmt17(get_config_key(s.config, k)));
  for (const auto& d : def.params) {
    std::string v;
    for (double x : s.params.at(d.name)) v += (v.empty() ? "" : ",") + fmt17(x);
    p.emplace_back("config.params." + d.name, v);
  }
  p.emplace_back("grid.parameter", s.axis.parameter);
  p.emplace_back("grid.min", fmt17(s.axis.min));
  p.emplace_back("grid.max", fmt17(s.axis.max));
  p.emplace_back("grid.steps", std::to_string(s.axis.steps));
  p.emplace_back("version", version);
  return p;
}

ResultTable make_table(const ScenarioSpec& s, std::string suffix, std::vector<std::string> cols) {
  ResultTable t;
  t.suffix = std::move(suffix);
  t.columns = std::move(cols);
  t.provenance = provenance(s);
  return t;
}

std::vector<double> time_list(const ScenarioSpec& s) {
  int count = int_param(s, "time_count");
  return snapshot_times(s.config, count);
}

// ---------------------------------------------------------------- scenarios

std::vector<ResultTable> run_free_packet(const ScenarioSpec& s) {
  SpatialGrid grid = axis_grid(s.axis);
  int count = int_param(s, "time_count");
  double t_max = s.params.at("t_max")[0];
  ResultTable fields = make_table(s, "", {"t", "x", "density_numeric", "density_exact", "abs_error"});
  ResultTable norms = make_table(s, "norms", {"t", "norm_numeric", "norm_exact"});
  for (int j = 0; j < count; ++j) {
    double t = count == 1 ? 0.0 : t_max * j / (count - 1);
    WaveField num = propagate_component(Component::Total, grid, t, s.config);
    WaveField ex = num;
    for (int i = 0; i < grid.n_points; ++i) {
      ex.values[i] = free_gaussian(grid.x(i), t, s.config);
      double dn = std::norm(num.values[i]);
      double de = std::norm(ex.values[i]);
      fields.rows.push_back({t, grid.x(i), dn, de, std::abs(dn - de)});
    }
    norms.rows.push_back({t, field_norm(num), field_norm(ex)});
  }
  return {fields, norms};
}

std::vector<ResultTable> run_above_barrier_naive(const ScenarioSpec& s) {
  SpatialGrid grid = axis_grid(s.axis);
  const PhysicalConfig& c = s.config;
  ResultTable fields = make_table(
      s, "", {"t", "x", "density_Inc", "density_R", "density_alpha", "density_beta", "density_T", "density_total"});
  ResultTable norms = make_table(s, "norms", {"t", "norm_total"});
  const Component tags[] = {Component::Inc, Component::R, Component::Alpha, Component::Beta, Component::T};
  for (double t : time_list(s)) {
    std::vector<WaveField> parts;
    for (Component g : tags) parts.push_back(naive_spm_field(g, grid, t, c));
    WaveField total = naive_spm_field(Component::Total, grid, t, c);
    for (int i = 0; i < grid.n_points; ++i) {
      double x = grid.x(i);
      bool left = x < 0.0, right = x > c.L, inside = !left && !right;
      bool live[] = {left, left, inside, inside, right};
      std::vector<Cell> row{t, x};
      for (int g = 0; g < 5; ++g) row.push_back(live[g] ? std::norm(parts[g].values[i]) : 0.0);
      row.push_back(std::norm(total.values[i]));
      fields.rows.push_back(std::move(row));
    }
    norms.rows.push_back({t, field_norm(total)});
  }
  ResultTable tp = make_table(s, "theta_prime", {"k_over_w", "theta_prime_over_L"});
  double lo = s.params.at("kw_min")[0], hi = s.params.at("kw_max")[0];
  int steps = int_param(s, "kw_steps");
  double w = c.w();
  tp.rows = parallel_rows(steps, [&](int i) -> std::vector<Cell> {
    double kw = lo + (hi - lo) * i / (steps - 1);
    return {kw, above_barrier_phase_derivative(kw * w, c) / c.L};
  });
  return {fields, norms, tp};
}

std::vector<ResultTable> run_multipeak(const ScenarioSpec& s) {
  SpatialGrid grid = axis_grid(s.axis);
  int terms = int_param(s, "terms");
  ResultTable fields = make_table(s, "", {"t", "x", "n", "density_term", "density_partial"});
  for (double t : time_list(s)) {
    for (int n = 1; n <= terms; ++n) {
      WaveField term = multipeak_series_field(Component::Total, n, grid, t, s.config, false);
      WaveField part = multipeak_series_field(Component::Total, n, grid, t, s.config, true);
      for (int i = 0; i < grid.n_points; ++i)
        fields.rows.push_back(
            {t, grid.x(i), static_cast<double>(n), std::norm(term.values[i]), std::norm(part.values[i])});
    }
  }
  ResultTable v = make_table(s, "validity", {"k0_L_over_q0_a", "valid"});
  Validity val = series_validity(s.config);
  v.rows.push_back({pi - val.margin, val.valid ? 1.0 : 0.0});
  return {fields, v};
}

std::vector<ResultTable> run_confront(const ScenarioSpec& s) {
  SpatialGrid grid = axis_grid(s.axis);
  int terms = int_param(s, "terms");
  ResultTable fields = make_table(s, "", {"t", "x", "channel", "density_analytic", "density_numeric"});
  ResultTable summary = make_table(s, "summary", {"t", "max_abs_diff", "snapshot_peak"});
  for (double t : time_list(s)) {
    ConfrontSnapshot snap = confront_snapshot(s.config, grid, t, terms);
    for (int i = 0; i < snap.left.n_points; ++i)
      fields.rows.push_back({t, snap.left.x(i), std::string("R"), snap.analytic_R[i], snap.numeric_R[i]});
    for (int i = 0; i < snap.right.n_points; ++i)
      fields.rows.push_back({t, snap.right.x(i), std::string("T"), snap.analytic_T[i], snap.numeric_T[i]});
    summary.rows.push_back({t, snap.max_abs_diff, snap.global_peak});
  }
  return {fields, summary};
}

std::vector<ResultTable> run_table1(const ScenarioSpec& s) {
  const auto& was = s.params.at("wa");
  std::vector<std::string> cols{"L_over_a"};
  for (double wa : was) cols.push_back("wa_" + format_number(wa));
  ResultTable grid = make_table(s, "", cols);
  ResultTable detail = make_table(s, "detail", {"L_over_a", "wa", "k_max_a", "distorted", "edge_maximum"});
  int nl = s.axis.steps;
  int nw = static_cast<int>(was.size());
  std::vector<std::vector<Cell>> cells = parallel_rows(nl * nw, [&](int idx) -> std::vector<Cell> {
    double La = s.axis.value(idx / nw);
    double wa = was[idx % nw];
    PhysicalConfig c = s.config;
    double w = wa / c.a;
    c.V0 = w * w / (2.0 * c.m);
    c.L = La * c.a;
    SpectralMaximum sm = kmax_find(c);
    return {La, wa, sm.k_max * c.a, sm.distorted ? 1.0 : 0.0, sm.edge_maximum ? 1.0 : 0.0};
  });
  for (int i = 0; i < nl; ++i) {
    std::vector<Cell> row{s.axis.value(i)};
    for (int j = 0; j < nw; ++j) {
      const auto& c = cells[i * nw + j];
      if (std::get<double>(c[3]) != 0.0)
        row.push_back(std::string("*"));
      else
        row.push_back(c[2]);
    }
    grid.rows.push_back(std::move(row));
  }
  detail.rows = std::move(cells);
  return {grid, detail};
}

std::vector<ResultTable> run_nr_phase(const ScenarioSpec& s) {
  const auto& ns = s.params.at("n");
  int na = s.axis.steps;
  int nn = static_cast<int>(ns.size());
  ResultTable t = make_table(s, "", {"n", "alpha", "t_one_way", "t_plus", "t_minus", "t_opaque"});
  t.rows = parallel_rows(na * nn, [&](int idx) -> std::vector<Cell> {
    double n = ns[idx / na];
    double al = s.axis.value(idx % na);
    return {n,
            al,
            nr_one_way_rate(n, al),
            symmetric_phase_time(n, al, Parity::Symmetric),
            symmetric_phase_time(n, al, Parity::Antisymmetric),
            2.0 / al};
  });
  return {t};
}

std::vector<ResultTable> run_symmetric_times(const ScenarioSpec& s) {
  double wL = s.params.at("wL")[0];
  ResultTable t = make_table(s, "", {"n", "alpha", "t_phase_plus", "t_dwell_plus", "t_self_plus", "identity_plus",
                                     "t_phase_minus", "t_dwell_minus", "t_self_minus", "identity_minus",
                                     "t_phase_one_way"});
  t.rows = parallel_rows(s.axis.steps, [&](int i) -> std::vector<Cell> {
    double n = s.axis.value(i);
    double al = wL * std::sqrt(1.0 - n);
    std::vector<Cell> row{n, al};
    for (Parity p : {Parity::Symmetric, Parity::Antisymmetric}) {
      double ph = symmetric_phase_time(n, al, p);
      double dw = symmetric_dwell(n, al, p);
      double se = symmetric_self_interference(n, al, p);
      row.insert(row.end(), {ph, dw, se, ph - dw - se});
    }
    row.push_back(nr_one_way_rate(n, al));
    return row;
  });
  return {t};
}

std::vector<ResultTable> run_relativistic_times(const ScenarioSpec& s) {
  double wL = s.params.at("wL")[0];
  const auto& us = s.params.at("upsilon");
  int nf = s.axis.steps;
  int nu = static_cast<int>(us.size());
  ResultTable t = make_table(s, "", {"upsilon", "n_sq", "T_sq", "T_sq_exact", "t_phase", "t_dwell", "t_dwell_exact",
                                     "t_dwell_rescaled", "t_self", "identity_residual"});
  t.rows = parallel_rows(nf * nu, [&](int idx) -> std::vector<Cell> {
    double u = us[idx / nf];
    double f = s.axis.value(idx % nf);
    double lo = std::max(0.0, zone_edge_n_sq(u, ZoneEdge::Lower));
    double hi = zone_edge_n_sq(u, ZoneEdge::Upper);
    double n2 = lo + f * (hi - lo);
    DimensionlessParams p = make_dimensionless(n2, u, wL);
    RelTransmission tr = relativistic_transmission(p);
    double te = rel_exact_T_mag(p);
    return {u,
            n2,
            tr.T_mag * tr.T_mag,
            te * te,
            rel_phase_time(p),
            rel_dwell(p),
            rel_dwell_exact(p),
            rel_rescaled_dwell(p),
            rel_self_interference(p),
            rel_identity_residual(p)};
  });
  ResultTable e = make_table(s, "edges", {"upsilon", "edge", "n_sq", "T_sq_limit", "t_phase_limit",
                                          "t_phase_limit_exact", "t_dwell_limit", "t_dwell_limit_printed"});
  for (double u : us) {
    for (ZoneEdge edge : {ZoneEdge::Lower, ZoneEdge::Upper}) {
      double n2 = zone_edge_n_sq(u, edge);
      if (!(n2 > 0.0) || u == 0.0) continue;
      double tl = limit_rel_T_at_edge(u, wL, edge);
      e.rows.push_back({u, std::string(edge == ZoneEdge::Lower ? "lower" : "upper"), n2, tl * tl,
                        limit_rel_phase_at_edge(u, edge), limit_rel_phase_at_edge_exact(u, wL, edge),
                        limit_rel_dwell_at_edge(u, edge), limit_rel_dwell_at_edge_printed(u, wL, edge)});
    }
  }
  return {t, e};
}

std::vector<ResultTable> run_hartman(const ScenarioSpec& s) {
  std::vector<double> alphas;
  for (int i = 0; i < s.axis.steps; ++i) alphas.push_back(s.axis.value(i));
  double tol = s.params.at("tolerance")[0];
  double u = s.params.at("upsilon")[0];
  struct Job {
    HartmanFamily family;
    const char* name;
    double n_sq;
    double upsilon;
  };
  std::vector<Job> jobs;
  for (double n : s.params.at("n")) {
    jobs.push_back({HartmanFamily::NrPhase, "nr-phase", n, 0.0});
    jobs.push_back({HartmanFamily::SymmetricPlus, "symmetric-plus", n, 0.0});
    jobs.push_back({HartmanFamily::SymmetricMinus, "symmetric-minus", n, 0.0});
  }
  for (double n2 : s.params.at("rel_n_sq")) jobs.push_back({HartmanFamily::Relativistic, "relativistic", n2, u});
  std::vector<HartmanCurve> curves(jobs.size());
  std::vector<std::string> errors(jobs.size());
  const int nj = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < nj; ++j) {
    try {
      curves[j] = hartman_curve(jobs[j].family, jobs[j].n_sq, jobs[j].upsilon, alphas, tol);
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ScenarioError(e);
  ResultTable t = make_table(s, "", {"family", "n_sq", "upsilon", "alpha", "t", "t_limit"});
  ResultTable sat = make_table(s, "saturation", {"family", "n_sq", "upsilon", "t_limit", "saturation_alpha", "finite"});
  for (int j = 0; j < nj; ++j) {
    const HartmanCurve& c = curves[j];
    for (std::size_t i = 0; i < c.alpha.size(); ++i)
      t.rows.push_back({std::string(jobs[j].name), jobs[j].n_sq, jobs[j].upsilon, c.alpha[i], c.t[i], c.t_limit});
    sat.rows.push_back({std::string(jobs[j].name), jobs[j].n_sq, jobs[j].upsilon, c.t_limit,
                        c.saturation_alpha.value_or(std::numeric_limits<double>::quiet_NaN()),
                        c.finite ? 1.0 : 0.0});
  }
  return {t, sat};
}

std::string timestamp_now() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

}  // namespace

double SweepAxis::value(int i) const {
  if (i == steps - 1) return max;
  return min + (max - min) * i / (steps - 1);
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : registry()) v.push_back(d.name);
    return v;
  }();
  return names;
}

std::string scenario_summary(const std::string& name) { return find_def(name).summary; }

ScenarioSpec parse_config(const std::string& text) { return parse_impl(text, std::nullopt); }

ScenarioSpec parse_config(const std::string& text, const std::string& scenario) {
  find_def(scenario);
  return parse_impl(text, scenario);
}

ScenarioSpec default_spec(const std::string& scenario) { return parse_config("{}", scenario); }

std::string spec_to_json(const ScenarioSpec& spec) {
  const ScenarioDef& def = find_def(spec.name);
  json j;
  j["scenario"] = spec.name;
  json c = json::object();
  for (const auto& k : def.config_keys) c[k] = get_config_key(spec.config, k);
  j["config"] = c;
  json p = json::object();
  for (const auto& d : def.params) {
    const auto& v = spec.params.at(d.name);
    if (d.list)
      p[d.name] = v;
    else
      p[d.name] = v.at(0);
  }
  j["params"] = p;
  j["sweep"] = {{"parameter", spec.axis.parameter}, {"min", spec.axis.min}, {"max", spec.axis.max},
                {"steps", spec.axis.steps}};
  j["output"] = spec.output;
  return j.dump(2);
}

ScenarioSpec spec_from_provenance(const std::vector<std::string>& header_lines) {
  std::map<std::string, std::string> kv;
  for (const auto& line : header_lines) {
    if (line.rfind("# ", 0) != 0) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  if (!kv.count("scenario")) throw ConfigError("provenance: missing scenario");
  const ScenarioDef& def = find_def(kv["scenario"]);
  auto num = [](const std::string& v) { return std::stod(v); };
  json j;
  j["scenario"] = def.name;
  json c = json::object();
  for (const auto& k : def.config_keys)
    if (kv.count("config." + k)) c[k] = num(kv["config." + k]);
  j["config"] = c;
  json p = json::object();
  for (const auto& d : def.params) {
    auto it = kv.find("config.params." + d.name);
    if (it == kv.end()) continue;
    std::vector<double> vals;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(num(item));
    if (d.list)
      p[d.name] = vals;
    else
      p[d.name] = vals.at(0);
  }
  j["params"] = p;
  if (kv.count("grid.parameter"))
    j["sweep"] = {{"parameter", kv["grid.parameter"]},
                  {"min", num(kv["grid.min"])},
                  {"max", num(kv["grid.max"])},
                  {"steps", std::stoi(kv["grid.steps"])}};
  return parse_config(j.dump());
}

std::vector<ResultTable> run_scenario(const ScenarioSpec& spec) {
  const std::string& n = spec.name;
  try {
    if (n == "free-packet") return run_free_packet(spec);
    if (n == "above-barrier-naive") return run_above_barrier_naive(spec);
    if (n == "multipeak") return run_multipeak(spec);
    if (n == "confront") return run_confront(spec);
    if (n == "table1") return run_table1(spec);
    if (n == "nr-phase") return run_nr_phase(spec);
    if (n == "symmetric-times") return run_symmetric_times(spec);
    if (n == "relativistic-times") return run_relativistic_times(spec);
    if (n == "hartman") return run_hartman(spec);
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(n + ": " + e.what());
  }
  throw ScenarioError("unknown scenario '" + n + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string to_csv(const ResultTable& t, bool timestamp) {
  std::string out;
  for (const auto& [k, v] : t.provenance) out += "# " + k + "=" + v + "\n";
  if (timestamp) out += "# timestamp=" + timestamp_now() + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

std::string to_json(const ResultTable& t, bool timestamp) {
  json j;
  json prov = json::object();
  for (const auto& [k, v] : t.provenance) prov[k] = v;
  if (timestamp) prov["timestamp"] = timestamp_now();
  j["provenance"] = prov;
  j["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) {
      if (const double* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          r.push_back(std::stod(format_number(*d)));
        else
          r.push_back(nullptr);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

std::vector<std::string> write_tables(const std::vector<ResultTable>& tables, const std::string& prefix, bool json_out,
                                      bool timestamp) {
  std::vector<std::string> paths;
  auto write = [&](const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << body;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
    paths.push_back(path);
  };
  for (const auto& t : tables) {
    std::string stem = prefix + (t.suffix.empty() ? "" : "_" + t.suffix);
    write(stem + ".csv", to_csv(t, timestamp));
    if (json_out) write(stem + ".json", to_json(t, timestamp));
  }
  return paths;
}

std::pair<std::optional<SpatialGrid>, std::optional<SpatialGrid>> outer_subgrids(const SpatialGrid& grid, double L) {
  grid.validate();
  double h = grid.spacing();
  int first_right = grid.n_points;
  int end_left = 0;
  for (int i = 0; i < grid.n_points; ++i) {
    double x = grid.x(i);
    if (x < 0.0) end_left = i + 1;
    if (x > L && first_right == grid.n_points) first_right = i;
  }
  auto sub = [&](int i0, int n) -> std::optional<SpatialGrid> {
    if (n < 2) return std::nullopt;
    double x0 = grid.x(i0);
    return SpatialGrid{x0, x0 + h * n, n};
  };
  return {sub(0, end_left), sub(first_right, grid.n_points - first_right)};
}

ConfrontSnapshot confront_snapshot(const PhysicalConfig& cfg, const SpatialGrid& grid, double t, int terms,
                                   const QuadratureOptions& opts) {
  auto [left, right] = outer_subgrids(grid, cfg.L);
  if (!left || !right) throw std::invalid_argument("confront grid needs at least two points on each side of the barrier");
  ConfrontSnapshot s;
  s.t = t;
  s.left = *left;
  s.right = *right;
  auto densities = [](const WaveField& f) {
    std::vector<double> d(f.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(f.values[i]);
    return d;
  };
  s.analytic_R = densities(multipeak_series_field(Component::R, terms, s.left, t, cfg, true));
  s.analytic_T = densities(multipeak_series_field(Component::T, terms, s.right, t, cfg, true));
  s.numeric_R = densities(propagate_component(Component::R, s.left, t, cfg, opts));
  s.numeric_T = densities(propagate_component(Component::T, s.right, t, cfg, opts));
  for (const auto* v : {&s.analytic_R, &s.numeric_R, &s.analytic_T, &s.numeric_T})
    for (double d : *v) s.global_peak = std::max(s.global_peak, d);
  for (std::size_t i = 0; i < s.analytic_R.size(); ++i)
    s.max_abs_diff = std::max(s.max_abs_diff, std::abs(s.analytic_R[i] - s.numeric_R[i]));
  for (std::size_t i = 0; i < s.analytic_T.size(); ++i)
    s.max_abs_diff = std::max(s.max_abs_diff, std::abs(s.analytic_T[i] - s.numeric_T[i]));
  return s;
}

}  // namespace tl
