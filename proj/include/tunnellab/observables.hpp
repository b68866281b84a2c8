#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tunnellab/core.hpp"
#include "tunnellab/stationary.hpp"

namespace tl {

struct TimeObservables {
  double tau_k = 0.0;
  double t_phase = 0.0;
  double t_dwell = 0.0;
  double t_self = 0.0;
  std::optional<double> t_dwell_rescaled;
  std::optional<Parity> parity;
};

namespace naive {

// Single-peak stationary phase times above the barrier, evaluated at k0.
struct AboveBarrierTimes {
  double t_Inc = 0.0;
  double t_R = 0.0;
  double t_alpha = 0.0;
  double t_beta = 0.0;
  double t_T = 0.0;
  double theta_prime = 0.0;  // dTheta/dk at k0 (a length)
  double dt_alpha = 0.0;     // t_alpha(L) - t_alpha(0)
  double dt_beta = 0.0;      // t_beta(0) - t_beta(L)
};

AboveBarrierTimes above_barrier_times(const PhysicalConfig& cfg, double x);

}  // namespace naive

// NR tunneling phase time and its opaque limit (physical time units).
double nr_phase_time(double k, const PhysicalConfig& cfg);
double nr_phase_time_opaque(double k, const PhysicalConfig& cfg);
// One-way rate t/tau and the plus-parity comparison curve, in (n, alpha).
double nr_one_way_rate(double n, double alpha);

struct AuxiliaryTimes {
  double G = 0.0;
  double G_over_alpha = 0.0;
  double t_alpha_T = 0.0;   // (2 m L / (w alpha)) G(alpha)
  double t_zero_T = 0.0;    // 4 m L / (3 w)
  double t_opaque_T = 0.0;  // 2 m L / (w alpha) = 2 m / (w rho)
};

double aux_G(double alpha);
double aux_G_over_alpha(double alpha);
// Phase time read at k -> w with the opacity alpha = rho L kept as a parameter.
AuxiliaryTimes nr_phase_time_auxiliary(double alpha, const PhysicalConfig& cfg);

struct SpectralMaximum {
  double k_max = 0.0;
  bool distorted = false;    // printed threshold on L
  bool edge_maximum = false;  // exact test: d/dk [g |T|] > 0 at k = w
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

SpectralMaximum kmax_find(const PhysicalConfig& cfg);
bool distortion_flag(const PhysicalConfig& cfg);
// Exact slope sign of g(k - k0)|T(k, L)| at k = w.
bool edge_maximum_condition(const PhysicalConfig& cfg);

double symmetric_phase_time(double n, double alpha, Parity parity);
double symmetric_dwell(double n, double alpha, Parity parity);
double symmetric_self_interference(double n, double alpha, Parity parity);
// Dwell from quadrature of the reconstructed intra-barrier density.
double symmetric_dwell_quadrature(double n, double alpha, Parity parity);
bool fermion_acceleration_predicate(double n, double alpha);
TimeObservables symmetric_times(const PhysicalConfig& cfg, Parity parity);

// Relativistic suite, all normalized by tau = L E / k.
double rel_phase_time(const DimensionlessParams& p);
double rel_phase_time_printed(const DimensionlessParams& p);  // f/g ratio only
double rel_phase_time_stable(const DimensionlessParams& p);   // derivative form, finite at rho = 0
double rel_dwell(const DimensionlessParams& p);               // printed modulus convention
double rel_dwell_exact(const DimensionlessParams& p);         // Klein-Gordon modulus
double rel_rescaled_dwell(const DimensionlessParams& p);
double rel_self_interference(const DimensionlessParams& p);
double rel_rescaled_dwell_quadrature(const DimensionlessParams& p);
double rel_identity_residual(const DimensionlessParams& p);
TimeObservables rel_times(const DimensionlessParams& p);

enum class ZoneEdge { Lower, Upper };

double zone_edge_n_sq(double upsilon, ZoneEdge edge);

// Closed-form limits.
double limit_one_way_rate_small_alpha(double n);
double limit_symmetric_rate_small_alpha(double n, Parity parity);
double limit_rel_T_at_edge(double upsilon, double wL, ZoneEdge edge);
double limit_rel_phase_small_rho(double n_sq, double upsilon);
double limit_rel_phase_at_edge(double upsilon, ZoneEdge edge);
double limit_rel_phase_at_edge_exact(double upsilon, double wL, ZoneEdge edge);
double limit_rel_dwell_at_edge(double upsilon, ZoneEdge edge);
double limit_rel_dwell_at_edge_printed(double upsilon, double wL, ZoneEdge edge);

enum class HartmanFamily { NrPhase, SymmetricPlus, SymmetricMinus, Relativistic };

struct HartmanCurve {
  std::vector<double> alpha;
  std::vector<double> t;
  double t_limit = 0.0;
  std::optional<double> saturation_alpha;
  bool finite = true;
};

// Phase time versus opacity alpha at fixed n (or n^2 and upsilon for the relativistic family).
// Units: m = 1 with V0 = 1/2 for the NR families (so w = 1) and V0 = upsilon for the relativistic one.
HartmanCurve hartman_curve(HartmanFamily family, double n_sq, double upsilon, const std::vector<double>& alphas,
                           double tolerance);

}  // namespace tl
