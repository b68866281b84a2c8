#include "tunnellab/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tl {

namespace {

const double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

double PhysicalConfig::w() const { return std::sqrt(2.0 * m * V0); }

void PhysicalConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  need(std::isfinite(m) && m > 0.0, "m must be finite and > 0");
  need(std::isfinite(V0) && V0 > 0.0, "V0 must be finite and > 0");
  need(std::isfinite(L) && L >= 0.0, "L must be finite and >= 0");
  need(std::isfinite(a) && a > 0.0, "a must be finite and > 0");
  need(std::isfinite(k0) && k0 > 0.0, "k0 must be finite and > 0");
  need(std::isfinite(x0), "x0 must be finite");
  double wv = w();
  need(std::isfinite(wv) && wv > 0.0, "w = sqrt(2 m V0) must be finite and > 0");
}

PhysicalConfig make_tunneling_config(double m, double V0, double L, double a, double k0, double x0) {
  PhysicalConfig c{m, V0, L, a, k0, x0, Dispersion::NonRelativistic};
  c.validate();
  if (!(k0 < c.w()))
    throw ConfigError("tunneling configuration requires k0 < w = " + fmt_num(c.w()));
  return c;
}

PhysicalConfig make_above_barrier_config(double m, double V0, double L, double a, double k0, double x0) {
  PhysicalConfig c{m, V0, L, a, k0, x0, Dispersion::NonRelativistic};
  c.validate();
  if (!(k0 > c.w()))
    throw ConfigError("above-barrier configuration requires k0 > w = " + fmt_num(c.w()));
  return c;
}

double rho_n_sq(double n_sq, double upsilon) {
  // (n^2 + u/2)^2 - 2 n^2 u = (n^2 - u/2)^2, so the difference factors exactly.
  double s = std::sqrt(1.0 + 2.0 * n_sq * upsilon);
  double d = n_sq - 0.5 * upsilon;
  return (1.0 - d) * (1.0 + d) / (s + n_sq + 0.5 * upsilon);
}

DimensionlessParams make_dimensionless(double n_sq, double upsilon, double wL) {
  DimensionlessParams p;
  p.n_sq = n_sq;
  p.upsilon = upsilon;
  p.wL = wL;
  double r2 = rho_n_sq(n_sq, upsilon);
  p.rho_n = r2 >= 0.0 ? std::sqrt(r2) : nan_v;
  p.alpha_opacity = (n_sq > 0.0 && n_sq < 1.0) ? wL * std::sqrt(1.0 - n_sq) : nan_v;
  return p;
}

DimensionlessParams to_dimensionless(const PhysicalConfig& cfg) {
  cfg.validate();
  double wv = cfg.w();
  double n_sq = (cfg.k0 / wv) * (cfg.k0 / wv);
  double ups = cfg.dispersion == Dispersion::RelativisticKG ? cfg.V0 / cfg.m : 0.0;
  return make_dimensionless(n_sq, ups, wv * cfg.L);
}

PhysicalConfig from_dimensionless(const DimensionlessParams& p, double m, double w, double a, Dispersion d) {
  PhysicalConfig c;
  c.m = m;
  c.V0 = w * w / (2.0 * m);
  c.L = p.wL / w;
  c.a = a;
  c.k0 = std::sqrt(p.n_sq) * w;
  c.dispersion = d;
  c.validate();
  return c;
}

double energy(double k, const PhysicalConfig& cfg) {
  if (!(k >= 0.0)) throw std::invalid_argument("energy: momentum must be >= 0");
  if (cfg.dispersion == Dispersion::NonRelativistic) return k * k / (2.0 * cfg.m);
  return std::hypot(k, cfg.m);
}

double group_velocity(double k, const PhysicalConfig& cfg) {
  if (!(k > 0.0)) throw std::invalid_argument("group_velocity: momentum must be > 0");
  if (cfg.dispersion == Dispersion::NonRelativistic) return k / cfg.m;
  return k / std::hypot(k, cfg.m);
}

NrZone nr_zone(double k, const PhysicalConfig& cfg) {
  double wv = cfg.w();
  if (k < wv) return NrZone::Tunneling;
  if (k > wv) return NrZone::AboveBarrier;
  return NrZone::Boundary;
}

RelZone rel_zone(double k, const PhysicalConfig& cfg) {
  double de = energy(k, cfg) - cfg.V0;
  if (de < -cfg.m) return RelZone::Klein;
  if (de == -cfg.m) return RelZone::LowerBoundary;
  if (de < cfg.m) return RelZone::Tunneling;
  if (de == cfg.m) return RelZone::UpperBoundary;
  return RelZone::Above;
}

RelZone rel_zone(double n_sq, double upsilon) {
  double d = n_sq - 0.5 * upsilon;
  if (d < -1.0) return RelZone::Klein;
  if (d == -1.0) return RelZone::LowerBoundary;
  if (d < 1.0) return RelZone::Tunneling;
  if (d == 1.0) return RelZone::UpperBoundary;
  return RelZone::Above;
}

ChannelMomentum channel_momenta(double k, const PhysicalConfig& cfg, Channel requested) {
  if (!(k >= 0.0)) throw std::invalid_argument("channel_momenta: momentum must be >= 0");
  if (cfg.dispersion == Dispersion::NonRelativistic) {
    double wv = cfg.w();
    double v = std::sqrt(std::abs((k - wv) * (k + wv)));
    if (k == wv) return {requested, 0.0};
    if (requested == Channel::Oscillating && k < wv)
      throw ZoneError("oscillating channel needs k > w = " + fmt_num(wv));
    if (requested == Channel::Evanescent && k > wv)
      throw ZoneError("evanescent channel needs 0 <= k < w = " + fmt_num(wv));
    return {requested, v};
  }
  double de = energy(k, cfg) - cfg.V0;
  double m = cfg.m;
  double prod = (m - de) * (m + de);  // m^2 - (E - V0)^2
  if (prod == 0.0) return {requested, 0.0};
  if (requested == Channel::Evanescent && prod < 0.0)
    throw ZoneError("evanescent channel needs |E - V0| < m, i.e. E in (" + fmt_num(cfg.V0 - m) + ", " +
                    fmt_num(cfg.V0 + m) + ")");
  if (requested == Channel::Oscillating && prod > 0.0)
    throw ZoneError("oscillating channel needs E < V0 - m (Klein zone) or E > V0 + m, i.e. outside (" +
                    fmt_num(cfg.V0 - m) + ", " + fmt_num(cfg.V0 + m) + ")");
  return {requested, std::sqrt(std::abs(prod))};
}

double spectrum_eval(const GaussianSpectrum& s, double k) {
  double d = k - s.k0;
  return std::pow(s.a * s.a / (2.0 * pi), 0.25) * std::exp(-s.a * s.a * d * d / 4.0);
}

double classical_traversal_time(const PhysicalConfig& cfg) {
  if (cfg.L == 0.0) return 0.0;
  return cfg.L / group_velocity(cfg.k0, cfg);
}

}  // namespace tl
