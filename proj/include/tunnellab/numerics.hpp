#pragma once

#include <functional>
#include <vector>

namespace tl {

// Cancellation-free building blocks; each switches to a Taylor series near 0.
double shc(double x);             // sinh(x)/x
double sinc(double x);            // sin(x)/x
double thc(double x);             // tanh(x)/x
double sinh_minus_x_cubed(double x);  // (sinh x - x)/x^3
double x_minus_sin_cubed(double x);   // (x - sin x)/x^3
double thc_minus_sech2_sq(double x);  // (tanh(x)/x - sech^2 x)/x^2

// Neumaier compensated accumulator; order of add() calls fixes the result.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Removes jumps larger than period/2 between neighbours by adding multiples of period.
std::vector<double> unwrap_phase(const std::vector<double>& samples, double period = 3.14159265358979323846);

// Adaptive Gauss-Kronrod quadrature on [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi, double epsrel = 1e-13);

// Maximizes a unimodal f on [lo, hi] starting from an interior guess with f(guess) above both ends.
double golden_section_max(const std::function<double(double)>& f, double lo, double guess, double hi,
                          double tol);

// Five-point central difference.
double central_diff(const std::function<double(double)>& f, double x, double h);

}  // namespace tl
