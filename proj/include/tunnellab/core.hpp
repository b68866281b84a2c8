#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tl {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

enum class Dispersion { NonRelativistic, RelativisticKG };

// Raised when a momentum or energy lies outside the zone an operation needs.
class ZoneError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised for invalid configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PhysicalConfig {
  double m = 1.0;
  double V0 = 1.0;
  double L = 0.0;
  double a = 1.0;
  double k0 = 1.0;
  double x0 = 0.0;
  Dispersion dispersion = Dispersion::NonRelativistic;

  double w() const;
  void validate() const;
};

// Checked constructors for the two NR scattering regimes.
PhysicalConfig make_tunneling_config(double m, double V0, double L, double a, double k0, double x0 = 0.0);
PhysicalConfig make_above_barrier_config(double m, double V0, double L, double a, double k0, double x0 = 0.0);

struct DimensionlessParams {
  double n_sq = 0.0;
  double upsilon = 0.0;
  double wL = 0.0;
  double alpha_opacity = 0.0;  // NaN outside the NR tunneling zone
  double rho_n = 0.0;          // NaN outside the evanescent zone
};

// rho_n^2 = sqrt(1 + 2 n^2 u) - n^2 - u/2, written without cancellation at the zone edges.
double rho_n_sq(double n_sq, double upsilon);

// Builds the dimensionless record from (n^2, upsilon, wL) and fills the derived fields.
DimensionlessParams make_dimensionless(double n_sq, double upsilon, double wL);
DimensionlessParams to_dimensionless(const PhysicalConfig& cfg);
// Inverse map given the mass and w scales.
PhysicalConfig from_dimensionless(const DimensionlessParams& p, double m, double w, double a, Dispersion d);

double energy(double k, const PhysicalConfig& cfg);
double group_velocity(double k, const PhysicalConfig& cfg);

enum class NrZone { Tunneling, Boundary, AboveBarrier };
enum class RelZone { Klein, LowerBoundary, Tunneling, UpperBoundary, Above };

NrZone nr_zone(double k, const PhysicalConfig& cfg);
RelZone rel_zone(double k, const PhysicalConfig& cfg);
RelZone rel_zone(double n_sq, double upsilon);

enum class Channel { Oscillating, Evanescent };

struct ChannelMomentum {
  Channel channel;
  double value;  // q above the barrier, rho inside the evanescent zone
};

ChannelMomentum channel_momenta(double k, const PhysicalConfig& cfg, Channel requested);

struct GaussianSpectrum {
  double a = 1.0;
  double k0 = 1.0;
};

double spectrum_eval(const GaussianSpectrum& s, double k);

double classical_traversal_time(const PhysicalConfig& cfg);

}  // namespace tl
