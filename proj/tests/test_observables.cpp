#include <doctest.h>

#include <cmath>

#include "tunnellab/numerics.hpp"
#include "tunnellab/observables.hpp"
#include "tunnellab/stationary.hpp"

using namespace tl;

namespace {

PhysicalConfig cfg_w(double w, double L, double m = 1.0) {
  PhysicalConfig c;
  c.m = m;
  c.V0 = w * w / (2.0 * m);
  c.L = L;
  return c;
}

// Transmitted phase with the free propagation factor removed.
double theta_nr(double k, const PhysicalConfig& c) { return std::arg(tunnel_amplitude_nr(k, c).T * std::polar(1.0, k * c.L)); }

double fd_phase_time(double k, const PhysicalConfig& c) {
  double h = 1e-5 * k;
  double d = std::remainder(theta_nr(k + h, c) - theta_nr(k - h, c), 2.0 * pi) / (2.0 * h);
  return c.m / k * d;
}

}  // namespace

TEST_CASE("naive above-barrier times") {
  PhysicalConfig c = make_above_barrier_config(1.0, 2.0, 1.0, 10.0, 3.0);
  c.x0 = -4.0;
  naive::AboveBarrierTimes t = naive::above_barrier_times(c, 0.0);
  CHECK(t.t_Inc == doctest::Approx(4.0 / 3.0));
  double h = 1e-6;
  double fd = (above_barrier_coeffs(3.0 + h, c).Theta - above_barrier_coeffs(3.0 - h, c).Theta) / (2.0 * h);
  CHECK(t.theta_prime == doctest::Approx(fd).epsilon(1e-7));
  CHECK_THROWS_AS(naive::above_barrier_times(make_tunneling_config(1.0, 2.0, 1.0, 1.0, 1.0), 0.0), ZoneError);
}

TEST_CASE("NR phase time is m/k times the energy slope of the transmitted phase") {
  for (double L : {0.3, 1.0, 4.0, 15.0}) {
    PhysicalConfig c = cfg_w(1.3, L, 0.8);
    for (double k : {0.1, 0.6, 1.2}) CHECK(nr_phase_time(k, c) == doctest::Approx(fd_phase_time(k, c)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(nr_phase_time(1.5, cfg_w(1.0, 1.0)), ZoneError);
}

TEST_CASE("NR phase time is continuous across the deep-barrier branch and tends to its opaque limit") {
  PhysicalConfig c = cfg_w(1.0, 1.0);
  double k = 0.6, rho = 0.8;
  c.L = 19.9999999 / rho;
  double a = nr_phase_time(k, c);
  c.L = 20.0000001 / rho;
  double b = nr_phase_time(k, c);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  c.L = 60.0;
  CHECK(nr_phase_time(k, c) == doctest::Approx(nr_phase_time_opaque(k, c)).epsilon(1e-12));
}

TEST_CASE("one-way rate is the phase time over m L / k") {
  for (double n : {0.1, 0.5, 0.9}) {
    for (double al : {0.05, 1.0, 7.0, 25.0}) {
      double k = std::sqrt(n), L = al / std::sqrt(1.0 - n);
      PhysicalConfig c = cfg_w(1.0, L);
      CHECK(nr_one_way_rate(n, al) == doctest::Approx(nr_phase_time(k, c) * k / L).epsilon(1e-12));
    }
    CHECK(nr_one_way_rate(n, 1e-4) == doctest::Approx(limit_one_way_rate_small_alpha(n)).epsilon(1e-6));
  }
  CHECK(nr_one_way_rate(0.3, 19.999999) == doctest::Approx(nr_one_way_rate(0.3, 20.000001)).epsilon(1e-6));
}

TEST_CASE("auxiliary G runs from 0 to 1 and joins its branches") {
  CHECK(aux_G(0.0) == 0.0);
  CHECK(aux_G_over_alpha(0.0) == doctest::Approx(2.0 / 3.0));
  CHECK(aux_G(40.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(aux_G(19.9999999) == doctest::Approx(aux_G(20.0000001)).epsilon(1e-12));
  double prev = 0.0;
  for (int i = 1; i < 150; ++i) {
    double g = aux_G(0.1 * i);
    CHECK(g > prev);
    prev = g;
  }
  PhysicalConfig c = cfg_w(2.0, 3.0);
  AuxiliaryTimes a = nr_phase_time_auxiliary(1e-6, c);
  CHECK(a.t_alpha_T == doctest::Approx(a.t_zero_T).epsilon(1e-9));
  AuxiliaryTimes big = nr_phase_time_auxiliary(50.0, c);
  CHECK(big.t_alpha_T == doctest::Approx(big.t_opaque_T).epsilon(1e-12));
}

TEST_CASE("spectral maximum agrees with a dense scan and with the slope test") {
  for (double wa : {1.5, 2.0, 4.0}) {
    for (double La : {0.1, 0.4, 0.8}) {
      PhysicalConfig c = make_tunneling_config(1.0, 0.5 * wa * wa, La, 1.0, 1.0);
      double w = c.w();
      auto f = [&](double k) { return spectrum_eval(GaussianSpectrum{c.a, c.k0}, k) * tunnel_transmission_modulus(k, c); };
      double best = 0.0, fb = -1.0;
      for (int i = 1; i < 200000; ++i) {
        double k = w * i / 200000.0;
        if (f(k) > fb) {
          fb = f(k);
          best = k;
        }
      }
      SpectralMaximum s = kmax_find(c);
      CHECK(s.k_max == doctest::Approx(best).epsilon(2e-5));
      // Slope of the objective just below the edge.
      double h = 1e-7 * w;
      bool rising = f(w - h) > f(w - 2.0 * h);
      CHECK(s.edge_maximum == rising);
      CHECK(s.distorted == distortion_flag(c));
    }
  }
  PhysicalConfig c = make_tunneling_config(1.0, 8.0, 0.0, 1.0, 1.0);
  CHECK(kmax_find(c).k_max == 1.0);
}

TEST_CASE("distortion flag threshold") {
  PhysicalConfig c = make_tunneling_config(1.0, 8.0, 0.0, 1.0, 1.0);  // w = 4
  double thr = std::sqrt(1.5) * 0.75;
  c.L = thr * 0.999;
  CHECK_FALSE(distortion_flag(c));
  c.L = thr * 1.001;
  CHECK(distortion_flag(c));
}

TEST_CASE("symmetric times: phase = dwell + self-interference, and the dwell matches quadrature") {
  for (Parity p : {Parity::Symmetric, Parity::Antisymmetric}) {
    for (double n : {0.05, 0.5, 0.95}) {
      for (double al : {0.01, 0.7, 3.0, 12.0}) {
        double ph = symmetric_phase_time(n, al, p);
        double id = symmetric_dwell(n, al, p) + symmetric_self_interference(n, al, p);
        CHECK(ph == doctest::Approx(id).epsilon(1e-12));
        CHECK(symmetric_dwell(n, al, p) == doctest::Approx(symmetric_dwell_quadrature(n, al, p)).epsilon(1e-9));
      }
      CHECK(symmetric_phase_time(n, 1e-6, p) == doctest::Approx(limit_symmetric_rate_small_alpha(n, p)).epsilon(1e-5));
      CHECK(symmetric_phase_time(n, 19.9999999, p) == doctest::Approx(symmetric_phase_time(n, 20.0000001, p)).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(symmetric_phase_time(1.2, 1.0, Parity::Symmetric), ZoneError);
  CHECK_THROWS(symmetric_dwell(0.5, 0.0, Parity::Symmetric));
}

TEST_CASE("symmetric phase time is the energy slope of the combined phase") {
  double w = 1.0, L = 1.7;
  PhysicalConfig c = cfg_w(w, L);
  for (Parity p : {Parity::Symmetric, Parity::Antisymmetric}) {
    for (double k : {0.2, 0.5, 0.8}) {
      double h = 1e-6;
      double d = std::remainder(symmetric_combined(k + h, c, p).phi_pm - symmetric_combined(k - h, c, p).phi_pm, 2.0 * pi) /
                 (2.0 * h);
      // tau = m L / k, so t / tau = (dphi/dk) / L.
      double t = d / L;
      double n = k * k, al = std::sqrt(1.0 - n) * L;
      CHECK(symmetric_phase_time(n, al, p) == doctest::Approx(t).epsilon(1e-6));
    }
  }
}

TEST_CASE("symmetric_times scales by the traversal time") {
  PhysicalConfig c = make_tunneling_config(2.0, 1.0, 1.5, 1.0, 0.8);
  TimeObservables t = symmetric_times(c, Parity::Antisymmetric);
  // w = sqrt(2 m V0) = 2
  double n = 0.8 * 0.8 / 4.0, al = std::sqrt(4.0 - 0.64) * 1.5;
  CHECK(t.tau_k == doctest::Approx(2.0 * 1.5 / 0.8));
  CHECK(t.t_phase == doctest::Approx(symmetric_phase_time(n, al, Parity::Antisymmetric) * t.tau_k));
  CHECK(t.parity == Parity::Antisymmetric);
}

TEST_CASE("fermion acceleration predicate is phase rate below one") {
  CHECK(fermion_acceleration_predicate(0.5, 3.0) == (symmetric_phase_time(0.5, 3.0, Parity::Antisymmetric) < 1.0));
  CHECK(symmetric_phase_time(0.5, 1e-3, Parity::Antisymmetric) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("relativistic printed and stable phase times agree where both apply") {
  for (double u : {0.5, 2.0, 5.0}) {
    double lo = std::max(0.0, u / 2 - 1), hi = u / 2 + 1;
    for (double f : {0.1, 0.5, 0.9}) {
      for (double wL : {0.5, 2.0 * pi, 30.0}) {
        DimensionlessParams p = make_dimensionless(lo + f * (hi - lo), u, wL);
        if (p.alpha_opacity < 1e-3 || p.alpha_opacity > 300.0) continue;
        CHECK(rel_phase_time_printed(p) == doctest::Approx(rel_phase_time_stable(p)).epsilon(1e-9));
        CHECK(rel_phase_time(p) == doctest::Approx(rel_phase_time_stable(p)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("relativistic suite reduces to the NR one-way rate at upsilon = 0") {
  for (double n2 : {0.2, 0.6}) {
    DimensionlessParams p = make_dimensionless(n2, 0.0, 3.0);
    CHECK(rel_phase_time(p) == doctest::Approx(nr_one_way_rate(n2, p.alpha_opacity)).epsilon(1e-12));
  }
}

TEST_CASE("relativistic dwell: exact modulus times (S - upsilon) equals the quadrature") {
  for (double u : {0.0, 1.0, 5.0}) {
    double lo = std::max(0.0, u / 2 - 1), hi = u / 2 + 1;
    for (double f : {0.2, 0.5, 0.8}) {
      double n2 = lo + f * (hi - lo);
      DimensionlessParams p = make_dimensionless(n2, u, 2.0 * pi);
      double S = std::sqrt(1.0 + 2.0 * n2 * u);
      CHECK(rel_dwell_exact(p) * (S - u) == doctest::Approx(rel_rescaled_dwell_quadrature(p)).epsilon(1e-10));
      CHECK(std::abs(rel_identity_residual(p)) < 1e-10);
      TimeObservables t = rel_times(p);
      CHECK(t.t_dwell_rescaled.has_value());
      CHECK(t.t_phase == doctest::Approx(rel_phase_time(p)));
    }
  }
}

TEST_CASE("relativistic limit formulas") {
  for (double u : {3.0, 5.0, 10.0}) {
    for (ZoneEdge e : {ZoneEdge::Lower, ZoneEdge::Upper}) {
      double n2 = zone_edge_n_sq(u, e);
      CHECK(rho_n_sq(n2, u) == doctest::Approx(0.0).epsilon(1e-12));
      double S = std::sqrt(1.0 + 2.0 * n2 * u);
      // Both forms of the edge dwell reduce to 1/(2S) for the printed pair.
      CHECK(std::abs(limit_rel_dwell_at_edge(u, e)) == doctest::Approx(0.5 / S).epsilon(1e-12));
      double big = 1e4;
      CHECK(limit_rel_dwell_at_edge_printed(u, big, e) == doctest::Approx(4.0 * n2 * n2 / (3.0 * S)).epsilon(1e-6));
      // T at the edge in the printed modulus convention.
      double off = e == ZoneEdge::Lower ? 1e-9 : -1e-9;
      DimensionlessParams p = make_dimensionless(n2 + off, u, 1.5);
      CHECK(relativistic_transmission(p).T_mag == doctest::Approx(limit_rel_T_at_edge(u, 1.5, e)).epsilon(1e-6));
      CHECK(rel_phase_time_stable(p) == doctest::Approx(limit_rel_phase_at_edge_exact(u, 1.5, e)).epsilon(1e-6));
    }
    for (ZoneEdge e : {ZoneEdge::Lower, ZoneEdge::Upper})
      CHECK(limit_rel_phase_at_edge_exact(u, 1e5, e) == doctest::Approx(limit_rel_phase_at_edge(u, e)).epsilon(1e-6));
  }
}

TEST_CASE("Hartman curves saturate for the NR families") {
  std::vector<double> al;
  for (int i = 1; i <= 300; ++i) al.push_back(0.1 * i);
  HartmanCurve c = hartman_curve(HartmanFamily::NrPhase, 0.5, 0.0, al, 1e-6);
  CHECK(c.finite);
  CHECK(c.saturation_alpha.has_value());
  CHECK(c.t.back() == doctest::Approx(c.t_limit).epsilon(1e-6));
  HartmanCurve r = hartman_curve(HartmanFamily::Relativistic, 2.5, 5.0, al, 1e-6);
  CHECK(r.finite);
  CHECK(r.t.size() == al.size());
}
