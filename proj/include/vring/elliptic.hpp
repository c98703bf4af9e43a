#pragma once

namespace vring {

/// Complete elliptic integrals of the first and second kind.
struct EllipticKE {
  double K;
  double E;
};

/// K and E as functions of the complementary parameter mc = 1 - m = 1 - k^2.
/// Parameterizing by mc keeps full accuracy in the near-singular regime
/// mc -> 0 that arises when two ring cross-sections almost touch.
/// Requires mc in (0, 1]; mc = 0 (coincident circles) is a domain error.
EllipticKE complete_elliptic_mc(double mc);

/// Values of the half-plane interaction kernel H for both orientations of a
/// point pair, sharing a single elliptic evaluation.
///
/// Inputs: w = x - y (components w1, w2), target/source radii x2 = x.r and
/// y2 = y.r, and b_extra >= 0 added to the squared separation.  b_extra = 0
/// gives the exact kernel; b_extra = delta^2 gives the blob-smoothed kernel
/// obtained by replacing |x - y|^2 with |x - y|^2 + delta^2 inside the stream
/// function (so the smoothed kernel stays exactly divergence-free in the
/// weighted sense and the pair identity x2*H2(x,y) + y2*H2(y,x) = 0 holds).
struct PairKernel {
  double h1_xy, h2_xy;  ///< H(x, y)
  double h1_yx, h2_yx;  ///< H(y, x)
};
PairKernel ring_kernel_pair(double w1, double w2, double x2, double y2, double b_extra);

/// Stream-function kernel S(x, y) = x2*y2/(2 pi) * int_0^pi cos(t) /
/// sqrt(|x-y|^2 + 2 x2 y2 (1 - cos t)) dt in closed elliptic form, with the
/// same optional smoothing of the squared separation.  d2 = |x - y|^2.
double ring_stream(double d2, double x2, double y2, double b_extra);

}  // namespace vring
