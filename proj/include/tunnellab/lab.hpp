#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tunnellab/core.hpp"
#include "tunnellab/wavepackets.hpp"

namespace tl {

inline constexpr const char* version = "0.1.0";

// Unknown scenario or a failure while evaluating one.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepAxis {
  std::string parameter;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;

  // Inclusive linear spacing: value(0) = min, value(steps - 1) = max.
  double value(int i) const;
};

struct ScenarioSpec {
  std::string name;
  PhysicalConfig config;
  // Scenario knobs, scalars stored as one-element lists.
  std::map<std::string, std::vector<double>> params;
  std::optional<SweepAxis> sweep;  // as given by the user
  SweepAxis axis;                  // effective axis (sweep or the scenario default)
  std::string output;
};

const std::vector<std::string>& scenario_names();
std::string scenario_summary(const std::string& name);

// Strict JSON config. Errors carry "line:column: " when a location is known.
ScenarioSpec parse_config(const std::string& text);
// Same, with the scenario fixed by the caller; a "scenario" key in text must agree.
ScenarioSpec parse_config(const std::string& text, const std::string& scenario);
ScenarioSpec default_spec(const std::string& scenario);
// Config text that parses back to an equivalent spec.
std::string spec_to_json(const ScenarioSpec& spec);
// Rebuilds the spec from the "# key=value" header of an emitted CSV.
ScenarioSpec spec_from_provenance(const std::vector<std::string>& header_lines);

using Cell = std::variant<double, std::string>;

struct ResultTable {
  std::string suffix;  // empty for the main table
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> provenance;
};

std::vector<ResultTable> run_scenario(const ScenarioSpec& spec);

std::string format_number(double v);  // 9 significant digits
std::string to_csv(const ResultTable& t, bool timestamp);
std::string to_json(const ResultTable& t, bool timestamp);
// Writes <prefix>.csv (and <prefix>_<suffix>.csv for extra tables); returns the paths.
std::vector<std::string> write_tables(const std::vector<ResultTable>& tables, const std::string& prefix, bool json,
                                      bool timestamp);

// Analytic partial sums against quadrature for the R and T channels at one time.
struct ConfrontSnapshot {
  double t = 0.0;
  SpatialGrid left;   // x < 0
  SpatialGrid right;  // x > L
  std::vector<double> analytic_R, numeric_R, analytic_T, numeric_T;  // densities
  double max_abs_diff = 0.0;
  double global_peak = 0.0;
};

ConfrontSnapshot confront_snapshot(const PhysicalConfig& cfg, const SpatialGrid& grid, double t, int terms,
                                   const QuadratureOptions& opts = {});

// Splits a grid into its points with x < 0 and x > L (points keep their x values).
std::pair<std::optional<SpatialGrid>, std::optional<SpatialGrid>> outer_subgrids(const SpatialGrid& grid, double L);

}  // namespace tl
