#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <sstream>
#include <string>

#include "tunnellab/lab.hpp"

using namespace tl;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> header_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line) && line.rfind("#", 0) == 0) out.push_back(line);
  return out;
}

const ResultTable& table(const std::vector<ResultTable>& ts, const std::string& suffix) {
  for (const auto& t : ts)
    if (t.suffix == suffix) return t;
  FAIL("missing table " << suffix);
  return ts.front();
}

int column(const ResultTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  FAIL("missing column " << name);
  return -1;
}

}  // namespace

TEST_CASE("registry lists every scenario with a summary") {
  const auto& names = scenario_names();
  CHECK(names.size() == 9);
  for (const auto& n : names) CHECK_FALSE(scenario_summary(n).empty());
  CHECK_THROWS_AS(scenario_summary("nope"), ScenarioError);
  CHECK_THROWS_AS(default_spec("nope"), ScenarioError);
}

TEST_CASE("a minimal config takes the scenario defaults") {
  ScenarioSpec s = parse_config(R"({"scenario": "table1"})");
  CHECK(s.name == "table1");
  CHECK(s.axis.parameter == "L_over_a");
  CHECK(s.axis.steps == 21);
  CHECK_FALSE(s.sweep.has_value());
  CHECK(s.params.at("wa").size() == 7);
  CHECK(s.axis.value(0) == 0.0);
  CHECK(s.axis.value(20) == 1.0);
}

TEST_CASE("config errors are reported with their location") {
  SUBCASE("unknown key") {
    std::string e = error_of("{\n  \"scenario\": \"table1\",\n  \"confg\": {}\n}");
    CHECK(e.rfind("3:3", 0) == 0);
    CHECK(e.find("confg") != std::string::npos);
  }
  SUBCASE("unknown nested key") {
    std::string e = error_of("{\"scenario\": \"table1\",\n \"config\": {\"V0\": 1}}");
    CHECK(e.rfind("2:", 0) == 0);
    CHECK(e.find("V0") != std::string::npos);
  }
  SUBCASE("syntax error") {
    std::string e = error_of("{\"scenario\": \"table1\",\n\n  \"config\": {\"a\": }\n}");
    CHECK(e.rfind("3:", 0) == 0);
    CHECK(e.find("syntax error") != std::string::npos);
  }
  SUBCASE("non-physical values") {
    CHECK_FALSE(error_of(R"({"scenario": "table1", "config": {"a": -1}})").empty());
    CHECK_FALSE(error_of(R"({"scenario": "table1", "config": {"k0": 3}})").empty());
    CHECK_FALSE(error_of(R"({"scenario": "table1", "params": {"wa": [1.5, "x"]}})").empty());
    CHECK_FALSE(error_of(R"({"scenario": "nr-phase", "params": {"n": [1.5]}})").empty());
  }
  SUBCASE("sweep bounds") {
    CHECK_FALSE(error_of(R"({"scenario": "table1", "sweep": {"parameter": "L_over_a", "min": 1, "max": 0, "steps": 5}})").empty());
    CHECK_FALSE(error_of(R"({"scenario": "table1", "sweep": {"parameter": "L_over_a", "min": 0, "max": 1, "steps": 1}})").empty());
    CHECK_FALSE(error_of(R"({"scenario": "table1", "sweep": {"parameter": "x", "min": 0, "max": 1, "steps": 5}})").empty());
    CHECK_FALSE(error_of(R"({"scenario": "table1", "sweep": {"parameter": "L_over_a", "min": 0, "max": 1}})").empty());
  }
  SUBCASE("missing scenario and wrong types") {
    CHECK_FALSE(error_of(R"({"config": {}})").empty());
    CHECK_FALSE(error_of(R"([1, 2])").empty());
    CHECK_FALSE(error_of(R"({"scenario": "table1", "output": 3})").empty());
  }
}

TEST_CASE("scenario names are checked") {
  CHECK_THROWS_AS(parse_config(R"({"scenario": "warp-drive"})"), ScenarioError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "table1"})", "nr-phase"), ConfigError);
  CHECK(parse_config("{}", "nr-phase").name == "nr-phase");
}

TEST_CASE("spec_to_json parses back to the same spec") {
  for (const auto& n : scenario_names()) {
    ScenarioSpec s = default_spec(n);
    ScenarioSpec back = parse_config(spec_to_json(s));
    CHECK(back.name == s.name);
    CHECK(back.params == s.params);
    CHECK(back.axis.min == s.axis.min);
    CHECK(back.axis.max == s.axis.max);
    CHECK(back.axis.steps == s.axis.steps);
    CHECK(back.config.k0 == s.config.k0);
    CHECK(back.config.L == s.config.L);
    CHECK(back.config.V0 == s.config.V0);
  }
}

TEST_CASE("the provenance header rebuilds the run") {
  ScenarioSpec s = parse_config(
      R"({"scenario": "table1", "params": {"wa": [2, 4]}, "sweep": {"parameter": "L_over_a", "min": 0.1, "max": 0.5, "steps": 5}})");
  auto tables = run_scenario(s);
  std::string csv = to_csv(tables.front(), false);
  auto lines = header_lines(csv);
  CHECK(lines.front() == "# scenario=table1");
  CHECK(csv.find("timestamp") == std::string::npos);
  CHECK(to_csv(tables.front(), true).find("# timestamp=") != std::string::npos);
  ScenarioSpec back = spec_from_provenance(lines);
  CHECK(to_csv(run_scenario(back).front(), false) == csv);
}

TEST_CASE("table1 reproduces known cells") {
  ScenarioSpec s = parse_config(R"({"scenario": "table1", "params": {"wa": [1.5, 4]}})");
  auto tables = run_scenario(s);
  const ResultTable& g = table(tables, "");
  int c15 = column(g, "wa_1.5"), c4 = column(g, "wa_4");
  // Row i holds L/a = i / 20.
  CHECK(std::get<double>(g.rows[4][c4]) == doctest::Approx(1.6571).epsilon(1e-4));
  CHECK(std::get<std::string>(g.rows[16][c15]) == "*");
  CHECK(std::get<double>(g.rows[0][c4]) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("symmetric-times rows satisfy phase = dwell + self") {
  ScenarioSpec s = parse_config(R"({"scenario": "symmetric-times", "sweep": {"parameter": "n", "min": 0.1, "max": 0.9, "steps": 9}})");
  auto tables = run_scenario(s);
  const ResultTable& t = table(tables, "");
  for (const char* id : {"identity_plus", "identity_minus"}) {
    int c = column(t, id);
    for (const auto& r : t.rows) CHECK(std::abs(std::get<double>(r[c])) < 1e-12);
  }
}

TEST_CASE("CSV output does not depend on the thread count") {
  int saved = omp_get_max_threads();
  for (const char* n : {"table1", "nr-phase", "relativistic-times", "multipeak"}) {
    ScenarioSpec s = default_spec(n);
    if (std::string(n) == "multipeak") s.axis.steps = 201;
    omp_set_num_threads(1);
    auto a = run_scenario(s);
    omp_set_num_threads(4);
    auto b = run_scenario(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_csv(a[i], false) == to_csv(b[i], false));
  }
  omp_set_num_threads(saved);
}

TEST_CASE("number formatting keeps nine significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(3.14159265358979) == "3.14159265");
  CHECK(format_number(1.23456789012e-20) == "1.23456789e-20");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("unwritable output raises IoError") {
  auto tables = run_scenario(parse_config(R"({"scenario": "nr-phase", "sweep": {"parameter": "alpha", "min": 1, "max": 2, "steps": 2}})"));
  CHECK_THROWS_AS(write_tables(tables, "/nonexistent-dir/x/out", false, false), IoError);
}

TEST_CASE("JSON mirror carries the same rows") {
  auto tables = run_scenario(parse_config(R"({"scenario": "nr-phase", "sweep": {"parameter": "alpha", "min": 1, "max": 2, "steps": 3}})"));
  std::string j = to_json(tables.front(), false);
  CHECK(j.find("\"provenance\"") != std::string::npos);
  CHECK(j.find("\"columns\"") != std::string::npos);
  CHECK(j.find("\"scenario\": \"nr-phase\"") != std::string::npos);
}

TEST_CASE("outer subgrids split at the barrier") {
  SpatialGrid g{-5.0, 5.0, 10};  // spacing 1, points -5..4
  auto [l, r] = outer_subgrids(g, 1.5);
  REQUIRE(l.has_value());
  REQUIRE(r.has_value());
  CHECK(l->n_points == 5);
  CHECK(r->x(0) == doctest::Approx(2.0));
  CHECK(r->n_points == 3);
}
