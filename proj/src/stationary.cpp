#include "tunnellab/stationary.hpp"

#include <cmath>
#include <string>

#include "tunnellab/numerics.hpp"

namespace tl {

namespace {

const cplx I{0.0, 1.0};

// Above this rho L the hyperbolic functions are replaced by scaled exponentials.
constexpr double deep_opacity = 20.0;

void require_above(double k, const PhysicalConfig& cfg) {
  if (!(k > cfg.w()))
    throw ZoneError("above-barrier amplitude needs k > w = " + std::to_string(cfg.w()));
}

void require_tunneling(double k, const PhysicalConfig& cfg) {
  if (!(k > 0.0 && k < cfg.w()))
    throw ZoneError("tunneling amplitude needs 0 < k < w = " + std::to_string(cfg.w()));
}

double q_of(double k, const PhysicalConfig& cfg) {
  double w = cfg.w();
  return std::sqrt((k - w) * (k + w));
}

double rho_of(double k, const PhysicalConfig& cfg) {
  double w = cfg.w();
  return std::sqrt((w - k) * (w + k));
}

// Continuous phase of 2kq cos(qL) + i(k^2+q^2) sin(qL), tracking qL branch by branch.
double above_theta(double k, double q, double L) {
  double qL = q * L;
  double n = std::floor(qL / pi + 0.5);
  double r = qL - n * pi;
  if (n == 0.0)  // arguments divided by q so that q -> 0 stays finite
    return std::atan2((k * k + q * q) * L * sinc(qL), 2.0 * k * std::cos(qL));
  return n * pi + std::atan2((k * k + q * q) * std::sin(r), 2.0 * k * q * std::cos(r));
}

}  // namespace

EvanescentSolution solve_evanescent(double k, double rho, double L) {
  EvanescentSolution s;
  s.k = k;
  s.rho = rho;
  s.L = L;
  double x = rho * L;
  cplx Dn;  // D / rho, optionally rescaled by e^{-rho L}
  double sh_over_rho;
  double scale;
  if (x <= deep_opacity) {
    sh_over_rho = L * shc(x);
    Dn = 2.0 * k * std::cosh(x) + I * (rho * rho - k * k) * sh_over_rho;
    scale = 1.0;
  } else {
    double e2 = std::exp(-2.0 * x);
    sh_over_rho = (1.0 - e2) / (2.0 * rho);
    Dn = k * (1.0 + e2) + I * (rho * rho - k * k) * sh_over_rho;
    scale = std::exp(-x);
  }
  cplx eikl = std::polar(1.0, -k * L);
  s.T = 2.0 * k * scale * eikl / Dn;
  s.R = -I * (k * k + rho * rho) * sh_over_rho / Dn;
  s.Theta = std::atan2((k * k - rho * rho) * L * thc(x), 2.0 * k);
  return s;
}

cplx EvanescentSolution::inner(double x) const {
  double u = x - L;
  double ru = rho * u;
  if (rho * L <= deep_opacity) {
    cplx tl = T * std::polar(1.0, k * L);
    return tl * (std::cosh(ru) + I * k * u * shc(ru));
  }
  // Deep barrier: fold e^{rho L} of cosh/sinh into the tiny transmitted amplitude.
  double e2 = std::exp(-2.0 * rho * L);
  cplx Dn = k * (1.0 + e2) + I * (rho * rho - k * k) * (1.0 - e2) / (2.0 * rho);
  double ep = std::exp(rho * (x - 2.0 * L));  // e^{rho u} e^{-rho L}
  double em = std::exp(-rho * x);             // e^{-rho u} e^{-rho L}
  double c = 0.5 * (ep + em);
  double s = 0.5 * (ep - em);
  return 2.0 * k * (c + I * (k / rho) * s) / Dn;
}

ScatterCoeffs above_barrier_coeffs(double k, const PhysicalConfig& cfg) {
  require_above(k, cfg);
  double q = q_of(k, cfg);
  double L = cfg.L;
  double qL = q * L;
  double c = std::cos(qL);
  double sq = L * sinc(qL);  // sin(qL)/q
  double Fq = std::sqrt(4.0 * k * k * c * c + (k * k + q * q) * (k * k + q * q) * sq * sq);  // F/q
  ScatterCoeffs s;
  s.F = q * Fq;
  s.Theta = above_theta(k, q, L);
  s.R = -I * (k * k - q * q) * sq / Fq * std::polar(1.0, s.Theta);
  s.T = 2.0 * k / Fq * std::polar(1.0, s.Theta - k * L);
  s.alpha_coef = k * (k + q) / s.F * std::polar(1.0, s.Theta - qL);
  s.beta_coef = -k * (k - q) / s.F * std::polar(1.0, s.Theta + qL);
  return s;
}

double above_barrier_phase_derivative(double k, const PhysicalConfig& cfg) {
  require_above(k, cfg);
  double q = q_of(k, cfg);
  double L = cfg.L;
  double qL = q * L;
  double k2 = k * k, q2 = q * q;
  // Numerator and denominator divided by q^3 and q^2 so q -> 0 stays finite.
  double num = 0.5 * k2 * k2 * x_minus_sin_cubed(2.0 * qL) * 8.0 * L * L * L + k2 * L +
               (2.0 * k2 - q2) * L * sinc(2.0 * qL);
  double sq = L * sinc(qL);
  double den = 4.0 * k2 + (k2 - q2) * (k2 - q2) * sq * sq;
  return 2.0 * num / den;
}

ScatterCoeffs tunnel_amplitude_nr(double k, const PhysicalConfig& cfg) {
  require_tunneling(k, cfg);
  double rho = rho_of(k, cfg);
  EvanescentSolution e = solve_evanescent(k, rho, cfg.L);
  ScatterCoeffs s;
  s.R = e.R;
  s.T = e.T;
  s.Theta = e.Theta;
  double w = cfg.w();
  double x = rho * cfg.L;
  if (x <= deep_opacity) {
    double sh = std::sinh(x);
    s.F = std::sqrt(4.0 * k * k * rho * rho + w * w * w * w * sh * sh);
  } else {
    s.F = std::exp(x) * 0.5 * w * w;  // sinh dominates
  }
  if (rho > 0.0) {
    cplx tl = e.T * std::polar(1.0, k * cfg.L);
    // inner = tl [cosh(rho u) + (ik/rho) sinh(rho u)], u = x - L
    s.alpha_coef = 0.5 * tl * (1.0 - I * k / rho) * std::exp(x);
    s.beta_coef = 0.5 * tl * (1.0 + I * k / rho) * std::exp(-x);
  }
  return s;
}

double tunnel_transmission_modulus(double k, const PhysicalConfig& cfg) {
  require_tunneling(k, cfg);
  double w = cfg.w();
  double rho = rho_of(k, cfg);
  double x = rho * cfg.L;
  // w^4 sinh^2(rho L) / (4 k^2 rho^2) with the 1/rho folded into sinh.
  double sl = cfg.L * shc(x);
  double r = w * w * sl / (2.0 * k);
  return 1.0 / std::sqrt(1.0 + r * r);
}

MultipeakSeries multipeak_coeffs(double k, const PhysicalConfig& cfg, double eps) {
  require_above(k, cfg);
  if (!(eps > 0.0)) throw std::invalid_argument("multipeak_coeffs: eps must be > 0");
  double q = q_of(k, cfg);
  double L = cfg.L;
  double kp = k + q;
  cplx R1 = (k - q) / kp;
  cplx a1 = 2.0 * k / kp;
  cplx b1 = 2.0 * k * (q - k) / (kp * kp) * std::polar(1.0, 2.0 * q * L);
  cplx T1 = 4.0 * k * q / (kp * kp) * std::polar(1.0, (q - k) * L);
  cplx R2 = (q / k) * a1 * b1;
  double rr = (k - q) / kp;
  MultipeakSeries s;
  s.r = rr * rr * std::polar(1.0, 2.0 * q * L);
  double ar = std::abs(s.r);
  double top = std::max({std::abs(R2), std::abs(a1), std::abs(b1), std::abs(T1)});
  int n = 1;
  double tail = top / (1.0 - ar);
  while (tail >= eps && n < 50'000'000) {
    tail *= ar;
    ++n;
  }
  // n terms of the alpha/beta/T geometric runs; R carries R_1 in front of its run.
  s.n_max = n;
  s.tail_bound = tail;
  s.R.reserve(n + 1);
  s.alpha.reserve(n);
  s.beta.reserve(n);
  s.T.reserve(n);
  s.R.push_back(R1);
  cplx rp = 1.0;
  for (int i = 0; i < n; ++i) {
    s.R.push_back(R2 * rp);
    s.alpha.push_back(a1 * rp);
    s.beta.push_back(b1 * rp);
    s.T.push_back(T1 * rp);
    rp *= s.r;
  }
  return s;
}

ScatterCoeffs multipeak_sums(double k, const PhysicalConfig& cfg) {
  require_above(k, cfg);
  double q = q_of(k, cfg);
  double L = cfg.L;
  double kp = k + q;
  double rr = (k - q) / kp;
  cplx r = rr * rr * std::polar(1.0, 2.0 * q * L);
  cplx a1 = 2.0 * k / kp;
  cplx b1 = 2.0 * k * (q - k) / (kp * kp) * std::polar(1.0, 2.0 * q * L);
  cplx T1 = 4.0 * k * q / (kp * kp) * std::polar(1.0, (q - k) * L);
  cplx R2 = (q / k) * a1 * b1;
  cplx g = 1.0 - r;
  ScatterCoeffs s;
  s.R = rr + R2 / g;
  s.alpha_coef = a1 / g;
  s.beta_coef = b1 / g;
  s.T = T1 / g;
  s.F = 2.0 * k * q / std::abs(s.T);
  // arg(T e^{ikL}) stays within pi/2 of qL; pick that branch.
  double raw = std::arg(s.T * std::polar(1.0, k * L));
  s.Theta = raw + 2.0 * pi * std::round((q * L - raw) / (2.0 * pi));
  return s;
}

SymmetricPair symmetric_amplitudes(double k, const PhysicalConfig& cfg) {
  require_tunneling(k, cfg);
  double w = cfg.w();
  double rho = rho_of(k, cfg);
  double L = cfg.L;
  double theta = std::atan2(2.0 * k * rho, 2.0 * k * k - w * w);
  // Both amplitudes divided through by e^{2 rho L}; expm1 keeps k -> w finite.
  cplx eth = std::polar(1.0, theta);
  cplx e2th_m1 = 2.0 * I * eth * std::sin(theta);  // e^{2i theta} - 1
  double em = std::expm1(-2.0 * rho * L);          // e^{-2 rho L} - 1
  cplx den = em - e2th_m1;
  cplx ekl = std::polar(1.0, -k * L);
  SymmetricPair p;
  p.R_LR = ekl * eth * em / den;
  p.T_LR = ekl * std::exp(-rho * L) * (-e2th_m1) / den;
  return p;
}

SymmetricAmplitude symmetric_combined(double k, const PhysicalConfig& cfg, Parity parity) {
  require_tunneling(k, cfg);
  double w = cfg.w();
  double rho = rho_of(k, cfg);
  double x = rho * cfg.L;
  double sg = parity == Parity::Symmetric ? 1.0 : -1.0;
  SymmetricAmplitude a;
  a.parity = parity;
  // The numerator is >= 0, so atan2 is already continuous on (0, w).
  if (x <= deep_opacity) {
    a.phi_pm = -std::atan2(2.0 * k * rho * std::sinh(x), (k * k - rho * rho) * std::cosh(x) + sg * w * w);
  } else {
    double e = std::exp(-x);
    a.phi_pm = -std::atan2(k * rho * (1.0 - e * e), 0.5 * (k * k - rho * rho) * (1.0 + e * e) + sg * w * w * e);
  }
  a.combined = std::polar(1.0, a.phi_pm - k * cfg.L);
  return a;
}

double symmetric_phase_derivative(double k, const PhysicalConfig& cfg, Parity parity) {
  require_tunneling(k, cfg);
  double w = cfg.w();
  double n = (k / w) * (k / w);
  double rho = rho_of(k, cfg);
  double al = rho * cfg.L;
  double sg = parity == Parity::Symmetric ? 1.0 : -1.0;
  // L (2/alpha)(n alpha +- sinh)/(2n - 1 +- cosh)
  double num, den;
  if (al <= deep_opacity) {
    num = parity == Parity::Symmetric ? n + shc(al) : (n - 1.0) - al * al * sinh_minus_x_cubed(al);
    den = parity == Parity::Symmetric ? 2.0 * n - 1.0 + std::cosh(al)
                                       : 2.0 * (n - 1.0) - 2.0 * std::pow(std::sinh(0.5 * al), 2);
  } else {
    double e = std::exp(-al);
    num = n * al * e + sg * 0.5 * (1.0 - e * e);
    den = (2.0 * n - 1.0) * e + sg * 0.5 * (1.0 + e * e);
    num /= al;
  }
  return 2.0 * cfg.L * num / den;
}

void require_rel_tunneling(const DimensionlessParams& p) {
  double d = p.n_sq - 0.5 * p.upsilon;
  if (!(p.n_sq > 0.0) || !(d * d < 1.0) || !(p.rho_n > 0.0 || p.rho_n == 0.0))
    throw ZoneError("relativistic tunneling zone needs (n^2 - u/2)^2 < 1 with n^2 > 0; n^2 = " +
                    std::to_string(p.n_sq) + " lies in the " + (d <= -1.0 ? "Klein zone (E < V0 - m)" :
                    d >= 1.0 ? "above zone (E > V0 + m)" : "invalid region"));
}

RelTransmission relativistic_transmission(const DimensionlessParams& p) {
  require_rel_tunneling(p);
  double n = std::sqrt(p.n_sq);
  double x = p.rho_n * p.wL;
  RelTransmission r;
  double s = p.wL * shc(x) / (2.0 * n);  // sinh(x)/(2 n rho_n)
  r.T_mag = 1.0 / std::sqrt(1.0 + s * s);
  r.phi = std::atan2((p.n_sq - p.rho_n * p.rho_n) * p.wL * thc(x), 2.0 * n);
  return r;
}

double rel_exact_T_mag(const DimensionlessParams& p) {
  require_rel_tunneling(p);
  double n = std::sqrt(p.n_sq);
  double x = p.rho_n * p.wL;
  double s = (p.n_sq + p.rho_n * p.rho_n) * p.wL * shc(x) / (2.0 * n);
  return 1.0 / std::sqrt(1.0 + s * s);
}

EvanescentSolution rel_exact_solution(const DimensionlessParams& p) {
  require_rel_tunneling(p);
  return solve_evanescent(std::sqrt(p.n_sq), p.rho_n, p.wL);
}

}  // namespace tl
