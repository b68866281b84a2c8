#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <cstring>
#include <random>

#include "oracle.hpp"
#include "tunnellab/numerics.hpp"
#include "tunnellab/observables.hpp"
#include "tunnellab/stationary.hpp"
#include "tunnellab/wavepackets.hpp"

using namespace tl;

namespace {

PhysicalConfig cfg_w(double w, double L) {
  PhysicalConfig c;
  c.V0 = 0.5 * w * w;
  c.L = L;
  return c;
}

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

}  // namespace

TEST_CASE("property: flux is conserved in both NR zones") {
  std::mt19937_64 g(20240601);
  for (int i = 0; i < 500; ++i) {
    double w = uniform(g, 0.1, 10.0), L = uniform(g, 0.0, 30.0) / w;
    PhysicalConfig c = cfg_w(w, L);
    double k = uniform(g, 0.001, 0.999) * w;
    ScatterCoeffs t = tunnel_amplitude_nr(k, c);
    CHECK(std::norm(t.R) + std::norm(t.T) == doctest::Approx(1.0).epsilon(1e-13));
    double ka = uniform(g, 1.001, 5.0) * w;
    ScatterCoeffs a = above_barrier_coeffs(ka, c);
    CHECK(std::norm(a.R) + std::norm(a.T) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("property: amplitudes agree with the continuity oracle") {
  std::mt19937_64 g(77);
  for (int i = 0; i < 200; ++i) {
    double L = uniform(g, 0.01, 10.0);
    double k = uniform(g, 0.01, 0.99);
    double rho = std::sqrt(1.0 - k * k);
    if (rho * L > 15.0) continue;
    oracle::Solution o = oracle::solve(k, cplx(0.0, rho), L);
    ScatterCoeffs s = tunnel_amplitude_nr(k, cfg_w(1.0, L));
    CHECK(std::abs(s.T - o.T) < 1e-10);
    CHECK(std::abs(s.R - o.R) < 1e-10);
  }
}

TEST_CASE("property: symmetric identity holds and the dwell is positive for the plus branch") {
  std::mt19937_64 g(4242);
  for (int i = 0; i < 1000; ++i) {
    double n = uniform(g, 1e-3, 1.0 - 1e-3), al = std::exp(uniform(g, std::log(1e-3), std::log(60.0)));
    for (Parity p : {Parity::Symmetric, Parity::Antisymmetric}) {
      double ph = symmetric_phase_time(n, al, p);
      double sum = symmetric_dwell(n, al, p) + symmetric_self_interference(n, al, p);
      CHECK(std::abs(ph - sum) <= 1e-11 * std::max(1.0, std::abs(ph)));
    }
    CHECK(symmetric_dwell(n, al, Parity::Symmetric) > 0.0);
  }
}

TEST_CASE("property: relativistic phase = rescaled dwell + self-interference") {
  std::mt19937_64 g(99);
  for (int i = 0; i < 300; ++i) {
    double u = uniform(g, 0.0, 12.0);
    double lo = std::max(0.0, u / 2 - 1), hi = u / 2 + 1;
    double n2 = lo + uniform(g, 0.01, 0.99) * (hi - lo);
    double wL = uniform(g, 0.1, 20.0);
    DimensionlessParams p = make_dimensionless(n2, u, wL);
    CHECK(std::abs(rel_identity_residual(p)) < 1e-9 * std::max(1.0, std::abs(rel_phase_time(p))));
  }
}

TEST_CASE("property: NR phase time matches a central difference of the transmitted phase") {
  std::mt19937_64 g(31337);
  for (int i = 0; i < 200; ++i) {
    double w = uniform(g, 0.5, 3.0), L = uniform(g, 0.05, 8.0) / w;
    PhysicalConfig c = cfg_w(w, L);
    double k = uniform(g, 0.05, 0.95) * w;
    auto th = [&](double kk) { return std::arg(tunnel_amplitude_nr(kk, c).T * std::polar(1.0, kk * L)); };
    double h = 1e-5 * k;
    double d = std::remainder(th(k + h) - th(k - h), 2.0 * pi) / (2.0 * h);
    CHECK(nr_phase_time(k, c) == doctest::Approx(c.m / k * d).epsilon(1e-6));
  }
}

TEST_CASE("property: propagation is bit-identical for 1 and N threads") {
  std::mt19937_64 g(5);
  int saved = omp_get_max_threads();
  for (int i = 0; i < 6; ++i) {
    PhysicalConfig c = cfg_w(uniform(g, 1.0, 5.0), uniform(g, 0.1, 2.0));
    c.k0 = uniform(g, 0.3, 2.0) * c.w();
    c.x0 = -uniform(g, 3.0, 8.0);
    SpatialGrid grid{-10.0, 10.0, 97};
    double t = uniform(g, 0.0, 2.0);
    omp_set_num_threads(1);
    WaveField a = propagate_fixed(Component::Total, grid, t, c, 600, true);
    omp_set_num_threads(1 + i % 4 + 1);
    WaveField b = propagate_fixed(Component::Total, grid, t, c, 600, true);
    CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(cplx)) == 0);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("property: multipeak coefficients sum to the full amplitudes") {
  std::mt19937_64 g(8);
  for (int i = 0; i < 200; ++i) {
    double L = uniform(g, 0.01, 5.0);
    double k = uniform(g, 1.05, 6.0);
    PhysicalConfig c = cfg_w(1.0, L);
    MultipeakSeries s = multipeak_coeffs(k, c, 1e-15);
    ScatterCoeffs full = above_barrier_coeffs(k, c);
    cplx R = 0.0, T = 0.0;
    for (const auto& v : s.R) R += v;
    for (const auto& v : s.T) T += v;
    CHECK(std::abs(R - full.R) < 1e-12);
    CHECK(std::abs(T - full.T) < 1e-12);
  }
}
