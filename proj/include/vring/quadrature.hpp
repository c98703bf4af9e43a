#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace vring {

/// Tolerances and depth budget for adaptive quadrature.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 40;  ///< maximal number of bisections of any initial segment
};

/// Thrown when adaptive refinement exhausts its depth budget before the
/// requested tolerance is met.  Carries the best estimate obtained so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Adaptive Gauss-Kronrod (7-15) integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec);

/// Same, but with user-chosen initial segment endpoints (ascending, at least
/// two entries).  Useful when the integrand has a known near-singular spot.
double integrate_segments(const std::function<double(double)>& f, std::span<const double> nodes,
                          const QuadratureSpec& spec);

}  // namespace vring
