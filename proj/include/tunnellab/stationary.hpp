#pragma once

#include <vector>

#include "tunnellab/core.hpp"

namespace tl {

// Barrier on [0, L]. Incident e^{ikx}, reflected R e^{-ikx}, transmitted T e^{ikx}.
// Above the barrier the inner field is alpha e^{iqx} + beta e^{-iqx};
// in the tunneling zone it is alpha e^{-rho x} + beta e^{rho x}.
struct ScatterCoeffs {
  cplx R;
  cplx T;
  cplx alpha_coef;
  cplx beta_coef;
  double F = 0.0;
  double Theta = 0.0;
};

// Matching solution for an evanescent inner region with momenta (k, rho), barrier [0, L].
// Shared by the NR and Klein-Gordon cases since the continuity conditions coincide.
struct EvanescentSolution {
  double k = 0.0;
  double rho = 0.0;
  double L = 0.0;
  cplx R;
  cplx T;
  double Theta = 0.0;  // arg(T e^{ikL}), continuous in k and L
  cplx inner(double x) const;
};

EvanescentSolution solve_evanescent(double k, double rho, double L);

ScatterCoeffs above_barrier_coeffs(double k, const PhysicalConfig& cfg);
double above_barrier_phase_derivative(double k, const PhysicalConfig& cfg);

ScatterCoeffs tunnel_amplitude_nr(double k, const PhysicalConfig& cfg);
// |T| written in terms of sinh^2(rho L); equals |tunnel_amplitude_nr(k).T|.
double tunnel_transmission_modulus(double k, const PhysicalConfig& cfg);

struct MultipeakSeries {
  cplx r;
  std::vector<cplx> R;  // R_1, R_2, ...
  std::vector<cplx> alpha;
  std::vector<cplx> beta;
  std::vector<cplx> T;
  int n_max = 0;  // terms kept per channel
  double tail_bound = 0.0;
};

MultipeakSeries multipeak_coeffs(double k, const PhysicalConfig& cfg, double eps);
ScatterCoeffs multipeak_sums(double k, const PhysicalConfig& cfg);

// Barrier on [-L/2, L/2] for the two-packet symmetric collision.
struct SymmetricPair {
  cplx R_LR;
  cplx T_LR;
};

enum class Parity { Symmetric, Antisymmetric };

struct SymmetricAmplitude {
  double phi_pm = 0.0;
  Parity parity = Parity::Symmetric;
  cplx combined;
};

SymmetricPair symmetric_amplitudes(double k, const PhysicalConfig& cfg);
SymmetricAmplitude symmetric_combined(double k, const PhysicalConfig& cfg, Parity parity);
// d(phi_pm)/dk in closed form.
double symmetric_phase_derivative(double k, const PhysicalConfig& cfg, Parity parity);

struct RelTransmission {
  double T_mag = 1.0;
  double phi = 0.0;
};

// Klein-Gordon tunneling in dimensionless variables. The modulus uses the
// reduced sinh^2/(4 n^2 rho_n^2) form; exact_T_mag below keeps the full factor.
RelTransmission relativistic_transmission(const DimensionlessParams& p);
double rel_exact_T_mag(const DimensionlessParams& p);
// Exact Klein-Gordon matching solution in units w = 1 (k = n, rho = rho_n, L = wL).
EvanescentSolution rel_exact_solution(const DimensionlessParams& p);
void require_rel_tunneling(const DimensionlessParams& p);

}  // namespace tl
