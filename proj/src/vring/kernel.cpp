#include "vring/kernel.hpp"

#include <cmath>
#include <vector>

#include "vring/elliptic.hpp"

namespace vring::kernel {
namespace {

void require_pair(HalfPlanePoint x, HalfPlanePoint y) {
  if (!(x.r > 0.0)) throw std::domain_error("kernel: target must satisfy x.r > 0");
  if (y.r < 0.0) throw std::domain_error("kernel: source must satisfy y.r >= 0");
  if (x.z == y.z && x.r == y.r) throw std::domain_error("kernel: x = y is singular");
}

// Initial segment endpoints for the angular integrals.  The integrands peak
// in a window of width ~ sqrt(d2/s) around theta = 0 when the circles almost
// touch; seeding geometrically growing segments there keeps the adaptive
// refinement shallow.
std::vector<double> theta_segments(double d2, double s) {
  std::vector<double> nodes{0.0};
  if (s > 0.0 && d2 > 0.0) {
    const double tstar = std::sqrt(d2 / s);
    for (double t = tstar; t < 0.5; t *= 8.0) nodes.push_back(t);
  }
  nodes.push_back(pi);
  return nodes;
}

}  // namespace

PlaneVector planar_kernel(PlaneVector w) {
  const double d2 = norm_sq(w);
  if (!(d2 > 0.0)) throw std::domain_error("planar_kernel: w = 0 is singular");
  const double c = 0.5 / (pi * d2);
  return {-c * w.c2, c * w.c1};
}

PlaneVector axisym_kernel_quadrature(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q) {
  require_pair(x, y);
  if (y.r == 0.0) return {0.0, 0.0};
  const PlaneVector w = separation(x, y);
  const double d2 = norm_sq(w);
  const double s = x.r * y.r;
  const auto nodes = theta_segments(d2, s);
  // Written with 1 - cos(theta) = 2 sin^2(theta/2) throughout: the naive
  // numerator y.r - x.r cos(theta) cancels catastrophically near the
  // diagonal and would put a noise floor above tight tolerances.
  const double h1 = integrate_segments(
      [&](double theta) {
        const double u = std::sin(0.5 * theta);
        const double two_u2 = 2.0 * u * u;
        const double D = d2 + 2.0 * s * two_u2;
        return y.r * (-w.c2 + x.r * two_u2) / (D * std::sqrt(D));
      },
      nodes, q);
  const double h2 = integrate_segments(
      [&](double theta) {
        const double u = std::sin(0.5 * theta);
        const double D = d2 + 4.0 * s * u * u;
        return y.r * w.c1 * (1.0 - 2.0 * u * u) / (D * std::sqrt(D));
      },
      nodes, q);
  return {0.5 / pi * h1, 0.5 / pi * h2};
}

PlaneVector axisym_kernel_elliptic(HalfPlanePoint x, HalfPlanePoint y) {
  require_pair(x, y);
  const PlaneVector w = separation(x, y);
  const PairKernel pk = ring_kernel_pair(w.c1, w.c2, x.r, y.r, 0.0);
  return {pk.h1_xy, pk.h2_xy};
}

PlaneVector lift_kernel(HalfPlanePoint x, HalfPlanePoint y) {
  require_pair(x, y);
  const double d = distance(x, y);
  return {0.25 / (pi * x.r) * std::log((1.0 + d) / d), 0.0};
}

KernelSplit remainder_kernel(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q) {
  KernelSplit split;
  split.total = axisym_kernel_quadrature(x, y, q);
  split.k_part = planar_kernel(separation(x, y));
  split.l_part = lift_kernel(x, y);
  split.r_part = split.total - split.k_part - split.l_part;
  return split;
}

double green_function(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q) {
  require_pair(x, y);
  if (y.r == 0.0) return 0.0;
  const double d2 = norm_sq(separation(x, y));
  const double s = x.r * y.r;
  const auto nodes = theta_segments(d2, s);
  return 0.5 / pi * s *
         integrate_segments(
             [&](double theta) {
               const double u = std::sin(0.5 * theta);
               return std::cos(theta) / std::sqrt(d2 + 4.0 * s * u * u);
             },
             nodes, q);
}

PlaneVector green_gradient(HalfPlanePoint x, HalfPlanePoint y, const QuadratureSpec& q) {
  require_pair(x, y);
  if (y.r == 0.0) return {0.0, 0.0};
  const PlaneVector w = separation(x, y);
  const double d2 = norm_sq(w);
  const double s = x.r * y.r;
  const auto nodes = theta_segments(d2, s);
  const auto D = [&](double theta) {
    const double u = std::sin(0.5 * theta);
    return d2 + 4.0 * s * u * u;
  };
  const double g1 = integrate_segments(
      [&](double theta) {
        const double Dv = D(theta);
        return -s * std::cos(theta) * w.c1 / (Dv * std::sqrt(Dv));
      },
      nodes, q);
  const double g2 = integrate_segments(
      [&](double theta) {
        const double u = std::sin(0.5 * theta);
        const double two_u2 = 2.0 * u * u;
        const double Dv = d2 + 2.0 * s * two_u2;
        const double cos_t = 1.0 - two_u2;
        return y.r * cos_t / std::sqrt(Dv) -
               s * cos_t * (w.c2 + y.r * two_u2) / (Dv * std::sqrt(Dv));
      },
      nodes, q);
  return {0.5 / pi * g1, 0.5 / pi * g2};
}

std::pair<double, double> profile_integrals(double a, const QuadratureSpec& q) {
  if (!(a > 0.0)) throw std::domain_error("profile_integrals: requires a > 0");
  const double a2 = a * a;
  const auto nodes = theta_segments(a2, 1.0);
  const auto denom = [&](double theta) {
    const double u = std::sin(0.5 * theta);
    const double D = a2 + 4.0 * u * u;
    return D * std::sqrt(D);
  };
  const double i1 =
      integrate_segments([&](double theta) { return std::cos(theta) / denom(theta); }, nodes, q);
  const double i2 = integrate_segments(
      [&](double theta) {
        const double u = std::sin(0.5 * theta);
        return 2.0 * u * u / denom(theta);
      },
      nodes, q);
  return {i1, i2};
}

}  // namespace vring::kernel
