#pragma once

#include <utility>

#include "vring/geometry.hpp"
#include "vring/quadrature.hpp"

namespace vring::kernel {

/// Planar free-space velocity kernel K(w) = (-w2, w1) / (2 pi |w|^2).
/// Throws std::domain_error when w = 0.
PlaneVector planar_kernel(PlaneVector w);

/// Interaction kernel H(x, y) by direct adaptive quadrature of its two
/// angular integrals.  Requires x.r > 0 and y.r >= 0; returns (0, 0) exactly
/// when y.r = 0.  x = y is a domain error.
PlaneVector axisym_kernel_quadrature(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q);

/// Same kernel through the closed elliptic-integral forms (fast route).
PlaneVector axisym_kernel_elliptic(HalfPlanePoint x, HalfPlanePoint y);

/// Lift part L(x, y) = (1 / (4 pi x.r)) log((1 + |x-y|) / |x-y|) e1.
PlaneVector lift_kernel(HalfPlanePoint x, HalfPlanePoint y);

/// Decomposition H = K + L + R of the interaction kernel.
struct KernelSplit {
  PlaneVector k_part;  ///< planar kernel at w = x - y
  PlaneVector l_part;  ///< lift term (axial only)
  PlaneVector r_part;  ///< bounded remainder
  PlaneVector total;   ///< H(x, y)
};

/// Splits H(x, y) with the total evaluated by quadrature and the remainder
/// defined as total - k_part - l_part, so the parts recompose exactly.
KernelSplit remainder_kernel(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q);

/// Stream-function kernel S(x, y) by quadrature of its angular integral.
double green_function(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q);

/// Gradient of S in the first argument, by quadrature of the differentiated
/// integrands.  Satisfies (d2 S, -d1 S) = x.r * H(x, y).
PlaneVector green_gradient(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q);

/// Scale-invariant profile integrals (I1(a), I2(a)) of the interaction
/// strength between two circles of unit radius whose cross-sections are a
/// apart:  I1(a) = int_0^pi cos t / (a^2 + 2(1 - cos t))^{3/2} dt and
/// I2(a) = int_0^pi (1 - cos t) / (a^2 + 2(1 - cos t))^{3/2} dt.  a > 0.
std::pair<double, double> profile_integrals(double a, const QuadratureSpec& q);

}  // namespace vring::kernel
