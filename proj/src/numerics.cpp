#include "tunnellab/numerics.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_min.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace tl {

namespace {

// Horner evaluation of sum c[i] * y^i.
template <std::size_t N>
double poly(const double (&c)[N], double y) {
  double r = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) r = r * y + c[i];
  return r;
}

struct GslHandlerOff {
  GslHandlerOff() { gsl_set_error_handler_off(); }
};
const GslHandlerOff gsl_handler_off;

double gsl_trampoline(double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); }

}  // namespace

// Series branches are truncated where the first dropped term is below double rounding.
double shc(double x) {
  if (std::abs(x) < 0.1) {
    static const double c[] = {1.0, 1.0 / 6, 1.0 / 120, 1.0 / 5040, 1.0 / 362880, 1.0 / 39916800};
    return poly(c, x * x);
  }
  return std::sinh(x) / x;
}

double sinc(double x) {
  if (std::abs(x) < 0.1) {
    static const double c[] = {1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880, -1.0 / 39916800};
    return poly(c, x * x);
  }
  return std::sin(x) / x;
}

double thc(double x) {
  if (std::abs(x) < 1e-3) {
    static const double c[] = {1.0, -1.0 / 3, 2.0 / 15, -17.0 / 315, 62.0 / 2835, -1382.0 / 155925};
    return poly(c, x * x);
  }
  return std::tanh(x) / x;
}

double sinh_minus_x_cubed(double x) {
  if (std::abs(x) < 0.1) {
    static const double c[] = {1.0 / 6, 1.0 / 120, 1.0 / 5040, 1.0 / 362880, 1.0 / 39916800, 1.0 / 6227020800.0};
    return poly(c, x * x);
  }
  return (std::sinh(x) - x) / (x * x * x);
}

double x_minus_sin_cubed(double x) {
  if (std::abs(x) < 0.1) {
    static const double c[] = {1.0 / 6, -1.0 / 120, 1.0 / 5040, -1.0 / 362880, 1.0 / 39916800,
                               -1.0 / 6227020800.0};
    return poly(c, x * x);
  }
  return (x - std::sin(x)) / (x * x * x);
}

double thc_minus_sech2_sq(double x) {
  double ch = std::cosh(x);
  if (std::abs(x) > 1.0) return (std::tanh(x) / x - 1.0 / (ch * ch)) / (x * x);
  // tanh(x)/x - sech^2(x) = (sinh 2x - 2x)/(2x cosh^2 x)
  return 4.0 * sinh_minus_x_cubed(2.0 * x) / (ch * ch);
}

void CompensatedSum::add(double v) {
  double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

std::vector<double> unwrap_phase(const std::vector<double>& samples, double period) {
  if (samples.empty()) throw std::invalid_argument("unwrap_phase: empty input");
  std::vector<double> out(samples.size());
  out[0] = samples[0];
  double shift = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    double d = samples[i] + shift - out[i - 1];
    shift -= period * std::round(d / period);
    out[i] = samples[i] + shift;
  }
  return out;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double epsrel) {
  if (lo == hi) return 0.0;
  constexpr std::size_t limit = 2000;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(limit), gsl_integration_workspace_free);
  gsl_function fn{&gsl_trampoline, const_cast<std::function<double(double)>*>(&f)};
  double result = 0.0, abserr = 0.0;
  int st = gsl_integration_qag(&fn, lo, hi, 0.0, epsrel, limit, GSL_INTEG_GAUSS61, ws.get(), &result, &abserr);
  if (st != GSL_SUCCESS && st != GSL_EROUND)
    throw std::runtime_error(std::string("integrate: ") + gsl_strerror(st));
  return result;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double guess, double hi,
                          double tol) {
  std::function<double(double)> neg = [&f](double x) { return -f(x); };
  gsl_function fn{&gsl_trampoline, &neg};
  std::unique_ptr<gsl_min_fminimizer, decltype(&gsl_min_fminimizer_free)> s(
      gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection), gsl_min_fminimizer_free);
  if (gsl_min_fminimizer_set(s.get(), &fn, guess, lo, hi) != GSL_SUCCESS) return guess;
  for (int it = 0; it < 500; ++it) {
    if (gsl_min_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    double a = gsl_min_fminimizer_x_lower(s.get());
    double b = gsl_min_fminimizer_x_upper(s.get());
    if (gsl_min_test_interval(a, b, tol, 0.0) == GSL_SUCCESS) break;
  }
  return gsl_min_fminimizer_x_minimum(s.get());
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace tl
