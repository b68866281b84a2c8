#include "tunnellab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tunnellab/numerics.hpp"

namespace tl {

namespace {

// Opacity above which sinh/cosh are replaced by scaled exponentials.
constexpr double deep = 20.0;

void require_nr_tunneling(double k, const PhysicalConfig& cfg) {
  if (!(k > 0.0 && k < cfg.w())) throw ZoneError("tunneling time needs 0 < k < w");
}

void require_symmetric_domain(double n, double alpha) {
  if (!(n > 0.0 && n < 1.0)) throw ZoneError("normalized energy n must lie in (0, 1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("opacity alpha must be > 0");
}

double sgn(Parity p) { return p == Parity::Symmetric ? 1.0 : -1.0; }

// 2n - 1 +- cosh(alpha), written without cancellation for the minus branch.
double sym_den(double n, double al, Parity p) {
  if (p == Parity::Symmetric) return 2.0 * n - 1.0 + std::cosh(al);
  double s = std::sinh(0.5 * al);
  return 2.0 * (n - 1.0) - 2.0 * s * s;
}

// Scaled by e^{-alpha} for deep barriers.
double sym_den_deep(double n, double al, Parity p) {
  double e = std::exp(-al);
  return (2.0 * n - 1.0) * e + sgn(p) * 0.5 * (1.0 + e * e);
}

double sinh_deep(double al) {
  double e = std::exp(-al);
  return 0.5 * (1.0 - e * e);
}

// (shch - alpha)/alpha^3
double shch_minus_x_cubed(double al) { return 4.0 * sinh_minus_x_cubed(2.0 * al); }

double rel_S(const DimensionlessParams& p) { return std::sqrt(1.0 + 2.0 * p.n_sq * p.upsilon); }

// Relativistic f/g coefficient blocks.
double rel_A(double n2, double u, double S) { return (4.0 + 4.0 * n2 * u + u * u) * S - 2.0 * u * (2.0 + 3.0 * n2 * u); }
double rel_B(double n2, double u, double S) { return (4.0 + 8.0 * n2 * u + u * u) * S - 4.0 * u * (1.0 + 2.0 * n2 * u); }

}  // namespace

namespace naive {

AboveBarrierTimes above_barrier_times(const PhysicalConfig& cfg, double x) {
  double w = cfg.w();
  if (!(cfg.k0 > w)) throw ZoneError("naive above-barrier times need k0 > w");
  double k0 = cfg.k0;
  double q0 = std::sqrt((k0 - w) * (k0 + w));
  double vk = k0 / cfg.m;
  double vq = q0 / cfg.m;
  double tp = above_barrier_phase_derivative(k0, cfg);
  double L = cfg.L;
  double x0 = cfg.x0;
  AboveBarrierTimes r;
  r.theta_prime = tp;
  r.t_Inc = (x - x0) / vk;
  r.t_R = -(x + x0 - tp) / vk;
  r.t_alpha = (x - L) / vq - (x0 - tp) / vk;
  r.t_beta = -(x - L) / vq - (x0 - tp) / vk;
  r.t_T = (x - x0 - L + tp) / vk;
  r.dt_alpha = L / vq;
  r.dt_beta = L / vq;
  return r;
}

}  // namespace naive

double nr_phase_time(double k, const PhysicalConfig& cfg) {
  require_nr_tunneling(k, cfg);
  double w = cfg.w();
  double L = cfg.L;
  double m = cfg.m;
  double rho = std::sqrt((w - k) * (w + k));
  double al = rho * L;
  double w2 = w * w, w4 = w2 * w2, k2 = k * k;
  if (al <= deep) {
    // numerator and denominator divided by alpha rho^2 and rho^2
    double num = w4 * L * L * shch_minus_x_cubed(al) + w2 + 2.0 * k2;
    double sl = L * shc(al);
    double den = 4.0 * k2 + w4 * sl * sl;
    return 2.0 * m * L / k * num / den;
  }
  double e2 = std::exp(-2.0 * al);
  double inv_sh2 = 4.0 * e2 / ((1.0 - e2) * (1.0 - e2));
  double coth = (1.0 + e2) / (1.0 - e2);
  double num = w4 * coth - (2.0 * k2 - w2) * k2 * al * inv_sh2;
  double den = 4.0 * k2 * rho * rho * inv_sh2 + w4;
  return 2.0 * m * L / (k * al) * num / den;
}

double nr_phase_time_opaque(double k, const PhysicalConfig& cfg) {
  require_nr_tunneling(k, cfg);
  double w = cfg.w();
  return 2.0 * cfg.m / (k * std::sqrt((w - k) * (w + k)));
}

double nr_one_way_rate(double n, double alpha) {
  require_symmetric_domain(n, alpha);
  if (alpha <= deep) {
    double num = 4.0 * alpha * alpha * sinh_minus_x_cubed(2.0 * alpha) + (1.0 - n) * (1.0 + 2.0 * n);
    double sh = std::sinh(alpha);
    return 2.0 * num / (4.0 * n * (1.0 - n) + sh * sh);
  }
  double e2 = std::exp(-2.0 * alpha);
  double inv_sh2 = 4.0 * e2 / ((1.0 - e2) * (1.0 - e2));
  double coth = (1.0 + e2) / (1.0 - e2);
  return (2.0 / alpha) * (coth - alpha * n * (2.0 * n - 1.0) * inv_sh2) / (4.0 * n * (1.0 - n) * inv_sh2 + 1.0);
}

double aux_G_over_alpha(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("G needs alpha >= 0");
  if (alpha <= deep) {
    double s = shc(alpha);
    return shch_minus_x_cubed(alpha) / (s * s);
  }
  return aux_G(alpha) / alpha;
}

double aux_G(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("G needs alpha >= 0");
  if (alpha <= deep) return alpha * aux_G_over_alpha(alpha);
  double e2 = std::exp(-2.0 * alpha);
  return (1.0 + e2) / (1.0 - e2) - alpha * 4.0 * e2 / ((1.0 - e2) * (1.0 - e2));
}

AuxiliaryTimes nr_phase_time_auxiliary(double alpha, const PhysicalConfig& cfg) {
  AuxiliaryTimes a;
  double w = cfg.w();
  a.G_over_alpha = aux_G_over_alpha(alpha);
  a.G = aux_G(alpha);
  a.t_alpha_T = 2.0 * cfg.m * cfg.L / w * a.G_over_alpha;
  a.t_zero_T = 4.0 * cfg.m * cfg.L / (3.0 * w);
  a.t_opaque_T = alpha > 0.0 ? 2.0 * cfg.m * cfg.L / (w * alpha) : std::numeric_limits<double>::infinity();
  return a;
}

bool distortion_flag(const PhysicalConfig& cfg) {
  return cfg.L > std::sqrt(1.5) * cfg.a * (1.0 - cfg.k0 / cfg.w());
}

bool edge_maximum_condition(const PhysicalConfig& cfg) {
  double w = cfg.w();
  double L = cfg.L;
  double x2 = w * w * L * L;
  // d ln|T|/dk at k = w against d ln g/dk = -a^2 (k - k0)/2
  double dlnT = w * L * L * (1.0 + x2 / 3.0) / (4.0 + x2);
  double dlng = -0.5 * cfg.a * cfg.a * (w - cfg.k0);
  return dlnT + dlng > 0.0;
}

SpectralMaximum kmax_find(const PhysicalConfig& cfg) {
  cfg.validate();
  double w = cfg.w();
  if (!(cfg.k0 > 0.0 && cfg.k0 < w)) throw ZoneError("kmax_find needs 0 < k0 < w");
  GaussianSpectrum g{cfg.a, cfg.k0};
  const double L = cfg.L;
  auto objective = [&](double k) {
    double rho = std::sqrt(std::max(0.0, (w - k) * (w + k)));
    double r = w * w * L * shc(rho * L) / (2.0 * k);
    return spectrum_eval(g, k) / std::sqrt(1.0 + r * r);
  };
  SpectralMaximum s;
  s.distorted = distortion_flag(cfg);
  s.edge_maximum = edge_maximum_condition(cfg);
  if (L == 0.0) {
    s.k_max = cfg.k0;
    s.bracket_lo = s.bracket_hi = cfg.k0;
    return s;
  }
  constexpr int coarse = 2000;
  int best = 1;
  double fbest = -1.0;
  for (int i = 1; i <= coarse; ++i) {
    double f = objective(w * i / coarse);
    if (f > fbest) {
      fbest = f;
      best = i;
    }
  }
  s.bracket_lo = w * (best - 1) / coarse;
  s.bracket_hi = w * std::min(best + 1, coarse) / coarse;
  if (best == coarse) {
    // Still rising at k = w: the supremum sits on the zone edge.
    s.k_max = w;
    return s;
  }
  s.k_max = golden_section_max(objective, s.bracket_lo, w * best / coarse, s.bracket_hi, 1e-8 / cfg.a);
  return s;
}

double symmetric_phase_time(double n, double alpha, Parity parity) {
  require_symmetric_domain(n, alpha);
  if (alpha <= deep) {
    double num = parity == Parity::Symmetric ? n + shc(alpha) : (n - 1.0) - alpha * alpha * sinh_minus_x_cubed(alpha);
    return 2.0 * num / sym_den(n, alpha, parity);
  }
  double e = std::exp(-alpha);
  double num = n * alpha * e + sgn(parity) * sinh_deep(alpha);
  return 2.0 / alpha * num / sym_den_deep(n, alpha, parity);
}

double symmetric_dwell(double n, double alpha, Parity parity) {
  require_symmetric_domain(n, alpha);
  if (alpha <= deep) {
    double num = parity == Parity::Symmetric ? 1.0 + shc(alpha) : -alpha * alpha * sinh_minus_x_cubed(alpha);
    return 2.0 * n * num / sym_den(n, alpha, parity);
  }
  double e = std::exp(-alpha);
  double num = alpha * e + sgn(parity) * sinh_deep(alpha);
  return 2.0 * n / alpha * num / sym_den_deep(n, alpha, parity);
}

double symmetric_self_interference(double n, double alpha, Parity parity) {
  require_symmetric_domain(n, alpha);
  if (alpha <= deep) return sgn(parity) * 2.0 * (1.0 - n) * shc(alpha) / sym_den(n, alpha, parity);
  return sgn(parity) * 2.0 / alpha * (1.0 - n) * sinh_deep(alpha) / sym_den_deep(n, alpha, parity);
}

double symmetric_dwell_quadrature(double n, double alpha, Parity parity) {
  require_symmetric_domain(n, alpha);
  // Units w = 1; barrier on [-L/2, L/2].
  double k = std::sqrt(n);
  double rho = std::sqrt(1.0 - n);
  double L = alpha / rho;
  EvanescentSolution e = solve_evanescent(k, rho, L);
  cplx shift = std::polar(1.0, -0.5 * k * L);
  double sg = sgn(parity);
  auto phi_left = [&](double x) { return shift * e.inner(x + 0.5 * L); };
  std::function<double(double)> dens = [&](double x) {
    cplx v = (phi_left(x) + sg * phi_left(-x)) / std::sqrt(2.0);
    return std::norm(v);
  };
  return integrate(dens, -0.5 * L, 0.5 * L, 1e-13) / L;
}

bool fermion_acceleration_predicate(double n, double alpha) {
  return symmetric_phase_time(n, alpha, Parity::Antisymmetric) < 1.0;
}

TimeObservables symmetric_times(const PhysicalConfig& cfg, Parity parity) {
  cfg.validate();
  double w = cfg.w();
  if (!(cfg.k0 < w)) throw ZoneError("symmetric collision times need k0 < w");
  double n = (cfg.k0 / w) * (cfg.k0 / w);
  double alpha = std::sqrt((w - cfg.k0) * (w + cfg.k0)) * cfg.L;
  TimeObservables t;
  t.tau_k = classical_traversal_time(cfg);
  t.t_phase = symmetric_phase_time(n, alpha, parity) * t.tau_k;
  t.t_dwell = symmetric_dwell(n, alpha, parity) * t.tau_k;
  t.t_self = symmetric_self_interference(n, alpha, parity) * t.tau_k;
  t.parity = parity;
  return t;
}

double rel_phase_time_printed(const DimensionlessParams& p) {
  require_rel_tunneling(p);
  double n2 = p.n_sq, u = p.upsilon;
  double S = rel_S(p);
  double x = p.rho_n * p.wL;
  double sh = std::sinh(x);
  double f = 8.0 * n2 * ((2.0 + 8.0 * n2 * u + u * u) - (4.0 * n2 + 3.0 * u) * S) +
             4.0 * rel_A(n2, u, S) * sh * std::cosh(x) / x;
  double g = 16.0 * n2 * (2.0 * (1.0 + 2.0 * n2 * u) - S * (2.0 * n2 + u)) + 2.0 * rel_B(n2, u, S) * sh * sh;
  return f / g;
}

double rel_phase_time_stable(const DimensionlessParams& p) {
  require_rel_tunneling(p);
  double n = std::sqrt(p.n_sq);
  double s = p.rho_n * p.rho_n;
  double c = p.wL;
  double y = c * p.rho_n;
  double S = rel_S(p);
  // tan(phi) = u = (n^2 - s)/(2n) h(s), h(s) = tanh(c sqrt s)/sqrt s
  double h = c * thc(y);
  double dh = -0.5 * c * c * c * thc_minus_sech2_sq(y);
  double ds = 2.0 * n * p.upsilon / S - 2.0 * n;
  double uval = (p.n_sq - s) / (2.0 * n) * h;
  double du = (p.n_sq - n * ds + s) / (2.0 * p.n_sq) * h + (p.n_sq - s) / (2.0 * n) * dh * ds;
  return du / (1.0 + uval * uval) / c;
}

double rel_phase_time(const DimensionlessParams& p) {
  double x = p.rho_n * p.wL;
  if (x >= 1e-3 && x <= 300.0) return rel_phase_time_printed(p);
  return rel_phase_time_stable(p);
}

namespace {

// f_D / g_D with a choice of the modulus factor in g_D.
double rel_dwell_impl(const DimensionlessParams& p, bool exact) {
  require_rel_tunneling(p);
  double n2 = p.n_sq;
  double r2 = p.rho_n * p.rho_n;
  double S = rel_S(p);
  double x = p.rho_n * p.wL;
  double mod = exact ? (n2 + r2) * (n2 + r2) : 1.0;
  if (x <= deep) {
    double fD = 2.0 + (r2 + n2) * p.wL * p.wL * shch_minus_x_cubed(x);
    double s = p.wL * shc(x);
    double gD = 2.0 * S * (1.0 + mod * s * s / (4.0 * n2));
    return fD / gD;
  }
  // Divide through by sinh^2.
  double e2 = std::exp(-2.0 * x);
  double inv_sh2 = 4.0 * e2 / ((1.0 - e2) * (1.0 - e2));
  double coth = (1.0 + e2) / (1.0 - e2);
  double fD = (1.0 - n2 / r2) * inv_sh2 + (1.0 + n2 / r2) * coth / x;
  double gD = 2.0 * S * (inv_sh2 + mod / (4.0 * n2 * r2));
  return fD / gD;
}

}  // namespace

double rel_dwell(const DimensionlessParams& p) { return rel_dwell_impl(p, false); }
double rel_dwell_exact(const DimensionlessParams& p) { return rel_dwell_impl(p, true); }

double rel_rescaled_dwell(const DimensionlessParams& p) { return (rel_S(p) - p.upsilon) * rel_dwell(p); }

double rel_self_interference(const DimensionlessParams& p) {
  EvanescentSolution e = rel_exact_solution(p);
  return -e.R.imag() / (std::sqrt(p.n_sq) * p.wL);
}

double rel_rescaled_dwell_quadrature(const DimensionlessParams& p) {
  EvanescentSolution e = rel_exact_solution(p);
  double S = rel_S(p);
  std::function<double(double)> dens = [&](double x) { return std::norm(e.inner(x)); };
  return (S - p.upsilon) / S * integrate(dens, 0.0, p.wL, 1e-13) / p.wL;
}

double rel_identity_residual(const DimensionlessParams& p) {
  return rel_phase_time(p) - (rel_rescaled_dwell_quadrature(p) + rel_self_interference(p));
}

TimeObservables rel_times(const DimensionlessParams& p) {
  TimeObservables t;
  t.tau_k = 1.0;
  t.t_phase = rel_phase_time(p);
  t.t_dwell = rel_dwell(p);
  t.t_self = rel_self_interference(p);
  t.t_dwell_rescaled = rel_rescaled_dwell(p);
  return t;
}

double zone_edge_n_sq(double upsilon, ZoneEdge edge) {
  return edge == ZoneEdge::Lower ? 0.5 * upsilon - 1.0 : 0.5 * upsilon + 1.0;
}

double limit_one_way_rate_small_alpha(double n) { return 1.0 + 1.0 / (2.0 * n); }

double limit_symmetric_rate_small_alpha(double n, Parity parity) {
  return parity == Parity::Symmetric ? 1.0 + 1.0 / n : 1.0;
}

double limit_rel_T_at_edge(double upsilon, double wL, ZoneEdge edge) {
  double d = edge == ZoneEdge::Lower ? 2.0 * upsilon - 4.0 : 2.0 * upsilon + 4.0;
  return 1.0 / std::sqrt(1.0 + wL * wL / d);
}

double limit_rel_phase_small_rho(double n_sq, double upsilon) {
  double S = std::sqrt(1.0 + 2.0 * n_sq * upsilon);
  return 4.0 / 3.0 * rel_A(n_sq, upsilon, S) / rel_B(n_sq, upsilon, S);
}

double limit_rel_phase_at_edge(double upsilon, ZoneEdge edge) {
  double n2 = zone_edge_n_sq(upsilon, edge);
  return edge == ZoneEdge::Lower ? -4.0 / 3.0 / (1.0 + 2.0 * n2) : -4.0 / 3.0 / (1.0 - 2.0 * n2);
}

double limit_rel_phase_at_edge_exact(double upsilon, double wL, ZoneEdge edge) {
  double n2 = zone_edge_n_sq(upsilon, edge);
  double S = std::sqrt(1.0 + 2.0 * n2 * upsilon);
  double c2 = n2 * wL * wL;
  return (0.5 + (S - upsilon) / S * (1.0 + c2 / 3.0)) / (1.0 + c2 / 4.0);
}

double limit_rel_dwell_at_edge(double upsilon, ZoneEdge edge) {
  double n2 = zone_edge_n_sq(upsilon, edge);
  return edge == ZoneEdge::Lower ? 0.5 / (2.0 * n2 + 1.0) : 0.5 / (2.0 * n2 - 1.0);
}

double limit_rel_dwell_at_edge_printed(double upsilon, double wL, ZoneEdge edge) {
  double n2 = zone_edge_n_sq(upsilon, edge);
  double S = std::sqrt(1.0 + 2.0 * n2 * upsilon);
  return (2.0 + 2.0 / 3.0 * n2 * wL * wL) / (2.0 * S * (1.0 + wL * wL / (4.0 * n2)));
}

HartmanCurve hartman_curve(HartmanFamily family, double n_sq, double upsilon, const std::vector<double>& alphas,
                           double tolerance) {
  HartmanCurve c;
  c.alpha = alphas;
  c.t.reserve(alphas.size());
  if (family == HartmanFamily::Relativistic) {
    DimensionlessParams base = make_dimensionless(n_sq, upsilon, 1.0);
    require_rel_tunneling(base);
    double w = std::sqrt(2.0 * upsilon);
    double k = std::sqrt(n_sq) * w;
    double E = std::sqrt(k * k + 1.0);
    double S = std::sqrt(1.0 + 2.0 * n_sq * upsilon);
    c.t_limit = 2.0 * rel_A(n_sq, upsilon, S) / rel_B(n_sq, upsilon, S) * E / (base.rho_n * w * k);
    for (double al : alphas) {
      DimensionlessParams p = make_dimensionless(n_sq, upsilon, al / base.rho_n);
      double L = p.wL / w;
      c.t.push_back(rel_phase_time(p) * L * E / k);
    }
  } else {
    double n = n_sq;
    double k = std::sqrt(n);
    double rho = std::sqrt(1.0 - n);
    c.t_limit = 2.0 / (k * rho);
    for (double al : alphas) {
      double tau = al / (rho * k);  // m L / k with L = alpha / rho
      double r = family == HartmanFamily::NrPhase          ? nr_one_way_rate(n, al)
                 : family == HartmanFamily::SymmetricPlus ? symmetric_phase_time(n, al, Parity::Symmetric)
                                                           : symmetric_phase_time(n, al, Parity::Antisymmetric);
      c.t.push_back(r * tau);
    }
  }
  for (double v : c.t) c.finite = c.finite && std::isfinite(v);
  for (std::size_t i = c.t.size(); i-- > 0;) {
    if (std::abs(c.t[i] - c.t_limit) >= tolerance * std::abs(c.t_limit)) break;
    c.saturation_alpha = c.alpha[i];
  }
  return c;
}

}  // namespace tl
