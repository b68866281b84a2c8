#include "tunnellab/wavepackets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tunnellab/numerics.hpp"
#include "tunnellab/stationary.hpp"

namespace tl {

namespace {

const cplx I{0.0, 1.0};

// Free Gaussian envelope centred at X = 0 at t = 0.
cplx envelope(double X, double t, double m, double a, double k0) {
  double tau = 2.0 * t / (m * a * a);
  double pref = std::pow(pi * a * a / 2.0 * (1.0 + tau * tau), -0.25);
  double d = X - k0 * t / m;
  cplx ex = -d * d / (a * a * cplx(1.0, tau)) - 0.5 * I * std::atan(tau) + I * (k0 * X - k0 * k0 / (2.0 * m) * t);
  return pref * std::exp(ex);
}

cplx envelope(double X, double t, const PhysicalConfig& cfg) { return envelope(X, t, cfg.m, cfg.a, cfg.k0); }

// Per-node data for the momentum quadrature.
struct SpectralTable {
  bool free = false;
  bool tunneling = false;
  double L = 0.0;
  std::vector<double> k;
  std::vector<double> s;  // q above the barrier, rho below
  std::vector<cplx> base;
  std::vector<cplx> R, alpha, beta, T;
  std::vector<EvanescentSolution> ev;
};

SpectralTable build_table(double t, const PhysicalConfig& cfg, int points, double half_width,
                          QuadratureReport* report) {
  SpectralTable tab;
  tab.L = cfg.L;
  tab.free = cfg.L == 0.0;
  double w = cfg.w();
  double lo = std::max(0.0, cfg.k0 - half_width / cfg.a);
  double hi = cfg.k0 + half_width / cfg.a;
  if (!tab.free) {
    if (cfg.k0 > w) {
      lo = std::max(lo, w);
    } else if (cfg.k0 < w) {
      tab.tunneling = true;
      hi = std::min(hi, w);
    } else {
      throw ZoneError("propagation needs k0 != w");
    }
  }
  if (!(hi > lo)) throw ZoneError("momentum window is empty after clipping to the physical zone");
  if (report) {
    report->k_lo = lo;
    report->k_hi = hi;
  }
  double h = (hi - lo) / points;
  GaussianSpectrum g{cfg.a, cfg.k0};
  tab.k.resize(points);
  tab.base.resize(points);
  if (!tab.free) {
    tab.s.resize(points);
    tab.R.resize(points);
    tab.alpha.resize(points);
    tab.beta.resize(points);
    tab.T.resize(points);
    if (tab.tunneling) tab.ev.resize(points);
  }
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
  for (int j = 0; j < points; ++j) {
    double k = lo + (j + 0.5) * h;  // midpoint nodes never touch k = w
    tab.k[j] = k;
    double E = k * k / (2.0 * cfg.m);
    tab.base[j] = h * inv_sqrt_2pi * spectrum_eval(g, k) * std::polar(1.0, -k * cfg.x0 - E * t);
    if (tab.free) continue;
    ScatterCoeffs c = tab.tunneling ? tunnel_amplitude_nr(k, cfg) : above_barrier_coeffs(k, cfg);
    tab.s[j] = std::sqrt(std::abs((k - w) * (k + w)));
    tab.R[j] = c.R;
    tab.alpha[j] = c.alpha_coef;
    tab.beta[j] = c.beta_coef;
    tab.T[j] = c.T;
    if (tab.tunneling) tab.ev[j] = solve_evanescent(k, tab.s[j], cfg.L);
  }
  return tab;
}

enum class Region { Left, Inside, Right };

Region region_of(double x, double L) {
  if (x < 0.0) return Region::Left;
  if (x <= L) return Region::Inside;
  return Region::Right;
}

// The per-point kernel: fixed-order compensated sum over the momentum nodes.
cplx point_value(const SpectralTable& tab, Component tag, double x) {
  CompensatedSum re, im;
  auto acc = [&](cplx v) {
    re.add(v.real());
    im.add(v.imag());
  };
  std::size_t n = tab.k.size();
  if (tab.free) {
    if (tag == Component::R || tag == Component::Alpha || tag == Component::Beta) return 0.0;
    for (std::size_t j = 0; j < n; ++j) acc(tab.base[j] * std::polar(1.0, tab.k[j] * x));
    return {re.value(), im.value()};
  }
  Component eff = tag;
  Region reg = region_of(x, tab.L);
  for (std::size_t j = 0; j < n; ++j) {
    double k = tab.k[j];
    const cplx& b = tab.base[j];
    cplx v;
    switch (eff) {
      case Component::Inc:
        v = b * std::polar(1.0, k * x);
        break;
      case Component::R:
        v = b * tab.R[j] * std::polar(1.0, -k * x);
        break;
      case Component::Alpha:
        v = tab.tunneling ? b * tab.alpha[j] * std::exp(-tab.s[j] * x)
                          : b * tab.alpha[j] * std::polar(1.0, tab.s[j] * x);
        break;
      case Component::Beta:
        v = tab.tunneling ? b * tab.beta[j] * std::exp(tab.s[j] * x)
                          : b * tab.beta[j] * std::polar(1.0, -tab.s[j] * x);
        break;
      case Component::T:
        v = b * tab.T[j] * std::polar(1.0, k * x);
        break;
      case Component::Total:
        if (reg == Region::Left)
          v = b * (std::polar(1.0, k * x) + tab.R[j] * std::polar(1.0, -k * x));
        else if (reg == Region::Right)
          v = b * tab.T[j] * std::polar(1.0, k * x);
        else if (tab.tunneling)
          v = b * tab.ev[j].inner(x);
        else
          v = b * (tab.alpha[j] * std::polar(1.0, tab.s[j] * x) + tab.beta[j] * std::polar(1.0, -tab.s[j] * x));
        break;
    }
    acc(v);
  }
  return {re.value(), im.value()};
}

void check_region(Component tag, const SpatialGrid& grid, const PhysicalConfig& cfg) {
  if (cfg.L == 0.0 || tag == Component::Total) return;
  double first = grid.x(0);
  double last = grid.x(grid.n_points - 1);
  auto fail = [&](const char* need) {
    throw std::invalid_argument(std::string("grid does not match component ") + component_name(tag) + ": " + need);
  };
  switch (tag) {
    case Component::Inc:
    case Component::R:
      if (last >= 0.0) fail("needs x < 0");
      break;
    case Component::Alpha:
    case Component::Beta:
      if (first < 0.0 || last > cfg.L) fail("needs 0 <= x <= L");
      break;
    case Component::T:
      if (first <= cfg.L) fail("needs x > L");
      break;
    default:
      break;
  }
}

WaveField assemble(const SpectralTable& tab, Component tag, const SpatialGrid& grid, double t, bool parallel) {
  WaveField f;
  f.grid = grid;
  f.t = t;
  f.tag = tag;
  f.values.resize(grid.n_points);
  const int n = grid.n_points;
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) f.values[i] = point_value(tab, tag, grid.x(i));
  } else {
    for (int i = 0; i < n; ++i) f.values[i] = point_value(tab, tag, grid.x(i));
  }
  return f;
}

WaveField propagate_impl(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg,
                         const QuadratureOptions& opts, QuadratureReport* report, bool parallel) {
  cfg.validate();
  grid.validate();
  if (cfg.dispersion != Dispersion::NonRelativistic)
    throw std::invalid_argument("wave-packet propagation is implemented for NR dispersion");
  check_region(tag, grid, cfg);
  int points = opts.initial_points;
  WaveField prev = assemble(build_table(t, cfg, points, opts.window_half_width, report), tag, grid, t, parallel);
  double change = 0.0;
  while (true) {
    points *= 2;
    WaveField next = assemble(build_table(t, cfg, points, opts.window_half_width, report), tag, grid, t, parallel);
    change = 0.0;
    for (std::size_t i = 0; i < next.values.size(); ++i)
      change = std::max(change, std::abs(next.values[i] - prev.values[i]));
    prev = std::move(next);
    if (change < opts.tolerance || points >= opts.max_points) break;
  }
  if (report) {
    report->points = points;
    report->last_change = change;
  }
  return prev;
}

double theta_prime(const PhysicalConfig& cfg) { return above_barrier_phase_derivative(cfg.k0, cfg); }

double q0_of(const PhysicalConfig& cfg) {
  double w = cfg.w();
  if (!(cfg.k0 > w)) throw ZoneError("above-barrier packet needs k0 > w");
  return std::sqrt((cfg.k0 - w) * (cfg.k0 + w));
}

}  // namespace

void SpatialGrid::validate() const {
  if (!(n_points >= 2)) throw std::invalid_argument("grid needs at least 2 points");
  if (!(x_max > x_min)) throw std::invalid_argument("grid needs x_max > x_min");
}

const char* component_name(Component c) {
  switch (c) {
    case Component::Inc:
      return "Inc";
    case Component::R:
      return "R";
    case Component::Alpha:
      return "alpha";
    case Component::Beta:
      return "beta";
    case Component::T:
      return "T";
    case Component::Total:
      return "total";
  }
  return "?";
}

cplx free_gaussian(double x, double t, const PhysicalConfig& cfg) {
  if (cfg.dispersion != Dispersion::NonRelativistic)
    throw std::invalid_argument("free_gaussian needs NR dispersion");
  return envelope(x - cfg.x0, t, cfg);
}

WaveField propagate_component(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg,
                              const QuadratureOptions& opts, QuadratureReport* report) {
  return propagate_impl(tag, grid, t, cfg, opts, report, true);
}

WaveField propagate_component_serial(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg,
                                     const QuadratureOptions& opts, QuadratureReport* report) {
  return propagate_impl(tag, grid, t, cfg, opts, report, false);
}

WaveField propagate_fixed(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg, int points,
                          bool parallel, double window_half_width) {
  cfg.validate();
  grid.validate();
  check_region(tag, grid, cfg);
  return assemble(build_table(t, cfg, points, window_half_width, nullptr), tag, grid, t, parallel);
}

cplx multipeak_term(Component tag, int n, double x, double t, const PhysicalConfig& cfg) {
  if (n < 1) throw std::invalid_argument("multipeak term order must be >= 1");
  double k0 = cfg.k0;
  double q0 = q0_of(cfg);
  double w = cfg.w();
  double L = cfg.L;
  double x0 = cfg.x0;
  double s = k0 / q0;
  double r1 = (k0 - q0) / (k0 + q0);
  cplx ph = std::polar(1.0, -w * w / q0 * L);
  auto ratio_pow = [&](int j) { return std::pow(r1 * ph * (r1 * ph), j); };
  switch (tag) {
    case Component::Inc:
      if (n != 1) return 0.0;
      return envelope(x - x0, t, cfg);
    case Component::R: {
      if (n == 1) return r1 * envelope(-x - x0, t, cfg);
      int j = n - 2;
      double pre = 4.0 * k0 * q0 * (q0 - k0) / std::pow(k0 + q0, 3);
      return pre * ph * ph * ratio_pow(j) * envelope(-x - x0 + 2.0 * (j + 1) * s * L, t, cfg);
    }
    case Component::Alpha: {
      int j = n - 1;
      return 2.0 * k0 / (k0 + q0) * std::polar(1.0, -w * w / q0 * x) * ratio_pow(j) *
             envelope((x + 2.0 * j * L) * s - x0, t, cfg);
    }
    case Component::Beta: {
      int j = n - 1;
      return 2.0 * k0 * (q0 - k0) / ((k0 + q0) * (k0 + q0)) * std::polar(1.0, w * w / q0 * (x - 2.0 * L)) *
             ratio_pow(j) * envelope((2.0 * j * L + 2.0 * L - x) * s - x0, t, cfg);
    }
    case Component::T: {
      int j = n - 1;
      return 4.0 * k0 * q0 / ((k0 + q0) * (k0 + q0)) * ph * ratio_pow(j) *
             envelope(x - x0 - L + (2.0 * j + 1.0) * s * L, t, cfg);
    }
    case Component::Total:
      if (x < 0.0) return multipeak_term(Component::Inc, n, x, t, cfg) + multipeak_term(Component::R, n, x, t, cfg);
      if (x <= L)
        return multipeak_term(Component::Alpha, n, x, t, cfg) + multipeak_term(Component::Beta, n, x, t, cfg);
      return multipeak_term(Component::T, n, x, t, cfg);
  }
  return 0.0;
}

WaveField multipeak_series_field(Component tag, int n, const SpatialGrid& grid, double t, const PhysicalConfig& cfg,
                                 bool partial_sum) {
  if (n < 1) throw std::invalid_argument("multipeak term order must be >= 1");
  grid.validate();
  q0_of(cfg);
  WaveField f;
  f.grid = grid;
  f.t = t;
  f.tag = tag;
  f.series_order = n;
  f.values.resize(grid.n_points);
  const int np = grid.n_points;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < np; ++i) {
    double x = grid.x(i);
    cplx v = 0.0;
    if (partial_sum) {
      for (int j = 1; j <= n; ++j) v += multipeak_term(tag, j, x, t, cfg);
    } else {
      v = multipeak_term(tag, n, x, t, cfg);
    }
    f.values[i] = v;
  }
  return f;
}

double multipeak_peak_time(Component tag, int n, double x, const PhysicalConfig& cfg) {
  if (n < 1) throw std::invalid_argument("multipeak term order must be >= 1");
  double s = cfg.k0 / q0_of(cfg);
  double L = cfg.L;
  double X = 0.0;
  int j = n - 1;
  switch (tag) {
    case Component::Inc:
      X = x - cfg.x0;
      break;
    case Component::R:
      X = n == 1 ? -x - cfg.x0 : -x - cfg.x0 + 2.0 * (n - 1) * s * L;
      break;
    case Component::Alpha:
      X = (x + 2.0 * j * L) * s - cfg.x0;
      break;
    case Component::Beta:
      X = (2.0 * j * L + 2.0 * L - x) * s - cfg.x0;
      break;
    case Component::T:
      X = x - cfg.x0 - L + (2.0 * j + 1.0) * s * L;
      break;
    case Component::Total:
      throw std::invalid_argument("peak time needs a single component");
  }
  return cfg.m * X / cfg.k0;
}

WaveField naive_spm_field(Component tag, const SpatialGrid& grid, double t, const PhysicalConfig& cfg) {
  grid.validate();
  double k0 = cfg.k0;
  double q0 = q0_of(cfg);
  double L = cfg.L;
  double x0 = cfg.x0;
  ScatterCoeffs c = above_barrier_coeffs(k0, cfg);
  double tp = theta_prime(cfg);
  cplx sh = std::polar(1.0, -k0 * tp);
  auto value = [&](Component g, double x) -> cplx {
    switch (g) {
      case Component::Inc:
        return envelope(x - x0, t, cfg);
      case Component::R:
        return c.R * sh * envelope(-x - x0 + tp, t, cfg);
      case Component::Alpha:
        return c.alpha_coef * std::polar(1.0, q0 * x - k0 * k0 / q0 * (x - L)) * sh *
               envelope(k0 / q0 * (x - L) - x0 + tp, t, cfg);
      case Component::Beta:
        return c.beta_coef * std::polar(1.0, -q0 * x + k0 * k0 / q0 * (x - L)) * sh *
               envelope(-k0 / q0 * (x - L) - x0 + tp, t, cfg);
      case Component::T:
        // T(k0) already carries e^{-ik0 L}; the expansion of its phase adds e^{+ik0 L}.
        return c.T * std::polar(1.0, -k0 * (tp - L)) * envelope(x - x0 - L + tp, t, cfg);
      case Component::Total:
        break;
    }
    return 0.0;
  };
  WaveField f;
  f.grid = grid;
  f.t = t;
  f.tag = tag;
  f.values.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    double x = grid.x(i);
    if (tag != Component::Total) {
      f.values[i] = value(tag, x);
    } else if (x < 0.0) {
      f.values[i] = value(Component::Inc, x) + value(Component::R, x);
    } else if (x <= L) {
      f.values[i] = value(Component::Alpha, x) + value(Component::Beta, x);
    } else {
      f.values[i] = value(Component::T, x);
    }
  }
  return f;
}

Validity series_validity(const PhysicalConfig& cfg) {
  double q0 = q0_of(cfg);
  double v = cfg.k0 / q0 * (cfg.L / cfg.a);
  return {v < pi, pi - v};
}

double spm_peak_prediction(Component tag, double t, const PhysicalConfig& cfg, std::optional<double> dlambda_dk) {
  double vk = cfg.k0 / cfg.m;
  double x = 0.0;
  if (tag == Component::Inc) {
    x = cfg.x0 + vk * t;
  } else {
    double tp = theta_prime(cfg);
    double q0 = q0_of(cfg);
    double vq = q0 / cfg.m;
    double L = cfg.L;
    switch (tag) {
      case Component::R:
        x = -cfg.x0 + tp - vk * t;
        break;
      case Component::Alpha:
        x = L + vq * (t + (cfg.x0 - tp) / vk);
        break;
      case Component::Beta:
        x = L - vq * (t + (cfg.x0 - tp) / vk);
        break;
      case Component::T:
        x = cfg.x0 + L - tp + vk * t;
        break;
      default:
        throw std::invalid_argument("SPM prediction needs one of Inc, R, alpha, beta, T");
    }
  }
  if (dlambda_dk) x -= *dlambda_dk;
  return x;
}

double field_norm(const WaveField& f) {
  CompensatedSum s;
  std::size_t n = f.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::norm(f.values[i]);
    s.add((i == 0 || i + 1 == n) ? 0.5 * d : d);
  }
  return s.value() * f.grid.spacing();
}

FieldPeak field_peak(const WaveField& f) {
  FieldPeak p;
  p.x = f.grid.x_min;
  double best = -1.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    double d = std::norm(f.values[i]);
    if (d > best) {
      best = d;
      p.index = static_cast<int>(i);
    }
  }
  p.density = best < 0.0 ? 0.0 : best;
  p.x = f.grid.x(p.index);
  p.degenerate = !(p.density > 0.0);
  return p;
}

std::vector<double> snapshot_times(const PhysicalConfig& cfg, int count) {
  double q0 = q0_of(cfg);
  std::vector<double> ts;
  for (int n = 0; n < count; ++n) ts.push_back(cfg.m * cfg.a * cfg.a * n * (cfg.L / cfg.a) / (cfg.a * q0));
  return ts;
}

}  // namespace tl
