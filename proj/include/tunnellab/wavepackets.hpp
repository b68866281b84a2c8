#pragma once

#include <optional>
#include <vector>

#include "tunnellab/core.hpp"

namespace tl {

struct SpatialGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 2;

  double spacing() const { return (x_max - x_min) / n_points; }
  double x(int i) const { return x_min + i * spacing(); }
  void validate() const;
};

enum class Component { Inc, R, Alpha, Beta, T, Total };

const char* component_name(Component c);

struct WaveField {
  SpatialGrid grid;
  std::vector<cplx> values;
  double t = 0.0;
  Component tag = Component::Total;
  int series_order = 0;  // > 0 for analytic multipeak fields
};

struct QuadratureOptions {
  int initial_points = 512;
  double tolerance = 1e-6;  // max |delta psi| between successive doublings
  int max_points = 1 << 18;
  double window_half_width = 8.0;  // in units of 1/a
};

struct QuadratureReport {
  int points = 0;
  double last_change = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
};

cplx free_gaussian(double x, double t, const PhysicalConfig& cfg);

// Spectral quadrature of one scattered component. The parallel and the serial
// versions evaluate the same per-point kernel and agree bit for bit.
WaveField propagate_component(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg,
                              const QuadratureOptions& opts = {}, QuadratureReport* report = nullptr);
WaveField propagate_component_serial(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg,
                                     const QuadratureOptions& opts = {}, QuadratureReport* report = nullptr);

// Fixed number of midpoint nodes, no refinement.
WaveField propagate_fixed(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg, int points,
                          bool parallel, double window_half_width = 8.0);

// Analytic multipeak packet: single n-th term, or partial sum of terms 1..n.
cplx multipeak_term(Component tag, int n, double x, double t, const PhysicalConfig& cfg);
WaveField multipeak_series_field(Component tag, int n, const SpatialGrid& grid, double t, const PhysicalConfig& cfg,
                                 bool partial_sum = false);
// Time at which the envelope of the n-th term peaks at position x.
double multipeak_peak_time(Component tag, int n, double x, const PhysicalConfig& cfg);

// Fields built from the single-peak stationary phase reading of each component.
WaveField naive_spm_field(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg);

struct Validity {
  bool valid = false;
  double margin = 0.0;
};

Validity series_validity(const PhysicalConfig& cfg);

// Stationary-phase peak position; dlambda_dk adds an extra spectral phase slope.
double spm_peak_prediction(Component tag, double t, const PhysicalConfig& cfg,
                           std::optional<double> dlambda_dk = std::nullopt);

double field_norm(const WaveField& f);

struct FieldPeak {
  double x = 0.0;
  double density = 0.0;
  int index = 0;
  bool degenerate = false;
};

FieldPeak field_peak(const WaveField& f);

// Snapshot times n (L/a)/(a q0) m a^2, n = 0..count-1.
std::vector<double> snapshot_times(const PhysicalConfig& cfg, int count = 6);

}  // namespace tl
