#include "vring/elliptic.hpp"

#include <cmath>
#include <stdexcept>

#include "vring/geometry.hpp"

namespace vring {
namespace {

// Parameter below which the hypergeometric series in m is used instead of
// the AGM closed forms.  The closed forms for H2 and S suffer catastrophic
// cancellation as m -> 0 (the elliptic combinations vanish like m^2), while
// the series converges geometrically for m <= 0.1.
constexpr double kSeriesSwitch = 0.1;

// Series sums used by the far-field branch:
//   T0 = sum_{j>=0} A_j m^j,          A_j = (3/2)_j / j! * W_j
//   U  = sum_{j>=1} A_j j/(j+1) m^j
//   V  = sum_{j>=1} D_j j/(j+1) m^j,  D_j = (1/2)_j / j! * W_j
// with W_j = int_0^{pi/2} sin^{2j} = (pi/2) (2j-1)!!/(2j)!!.
struct SeriesSums {
  double T0, U, V;
};

SeriesSums far_field_series(double m) {
  double A = 0.5 * pi;  // A_0
  double D = 0.5 * pi;  // D_0
  double mj = 1.0;
  SeriesSums out{A, 0.0, 0.0};
  for (int j = 0; j < 64; ++j) {
    const double jd = static_cast<double>(j);
    const double half_ratio = (2.0 * jd + 1.0) / (2.0 * jd + 2.0);
    A *= (1.5 + jd) / (1.0 + jd) * half_ratio;
    D *= (0.5 + jd) / (1.0 + jd) * half_ratio;
    mj *= m;
    // Terms now belong to index j+1.
    const double frac = (jd + 1.0) / (jd + 2.0);
    const double tA = A * mj;
    out.T0 += tA;
    out.U += tA * frac;
    out.V += D * mj * frac;
    if (tA < 1e-17 * out.T0) break;
  }
  return out;
}

}  // namespace

EllipticKE complete_elliptic_mc(double mc) {
  if (!(mc > 0.0) || mc > 1.0)
    throw std::domain_error("complete_elliptic_mc: requires mc in (0, 1]");
  double a = 1.0;
  double b = std::sqrt(mc);
  double csum = 0.5 * (1.0 - mc);  // 2^{-1} c_0^2 with c_0 = k
  double pow2 = 0.5;
  for (int i = 0; i < 64; ++i) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    pow2 *= 2.0;
    csum += pow2 * c * c;
    a = an;
    b = bn;
    // Stop above the 1-ulp dither of the iterates: past this point the true
    // c_n would be ~c^2, so the neglected tail of the E sum is ~1e-29, while
    // letting the loop run would amplify rounding noise by pow2.
    if (c <= 1e-15 * an) break;
  }
  const double K = 0.5 * pi / a;
  return {K, K * (1.0 - csum)};
}

PairKernel ring_kernel_pair(double w1, double w2, double x2, double y2, double b_extra) {
  if (!(x2 > 0.0) || y2 < 0.0)
    throw std::domain_error("ring_kernel_pair: requires target radius > 0 and source radius >= 0");
  const double d2 = w1 * w1 + w2 * w2;
  const double b = d2 + b_extra;
  if (!(b > 0.0))
    throw std::domain_error("ring_kernel_pair: coincident points need positive smoothing");
  const double s = x2 * y2;
  const double P = b + 4.0 * s;
  const double m = 4.0 * s / P;

  PairKernel out;
  if (m > kSeriesSwitch) {
    const auto [K, E] = complete_elliptic_mc(b / P);
    const double inv_sqrtP = 1.0 / std::sqrt(P);
    const double inv_b = 1.0 / b;
    const double c1 = 0.5 / pi * inv_sqrtP;
    const double KmE = K - E;
    out.h1_xy = c1 * (KmE - 2.0 * y2 * w2 * inv_b * E);
    out.h1_yx = c1 * (KmE + 2.0 * x2 * w2 * inv_b * E);
    const double combo = (2.0 - m) * E - 2.0 * (b / P) * K;
    const double t = 0.25 / pi * w1 * combo * inv_b / inv_sqrtP;
    out.h2_xy = t / x2;
    out.h2_yx = -t / y2;  // m > 0 guarantees y2 > 0 here
  } else {
    const auto [T0, U, V] = far_field_series(m);
    (void)V;
    const double c = 1.0 / (pi * P * std::sqrt(P));
    out.h1_xy = c * (y2 * y2 * T0 - s * U);
    out.h1_yx = c * (x2 * x2 * T0 - s * U);
    const double hc = c * w1 * U;
    out.h2_xy = y2 * hc;
    out.h2_yx = -x2 * hc;
  }
  return out;
}

double ring_stream(double d2, double x2, double y2, double b_extra) {
  const double s = x2 * y2;
  if (s <= 0.0) return 0.0;  // one circle degenerates to a point on the axis
  const double b = d2 + b_extra;
  if (!(b > 0.0))
    throw std::domain_error("ring_stream: coincident points need positive smoothing");
  const double P = b + 4.0 * s;
  const double m = 4.0 * s / P;
  if (m > kSeriesSwitch) {
    const auto [K, E] = complete_elliptic_mc(b / P);
    return 0.25 / pi * std::sqrt(P) * ((2.0 - m) * K - 2.0 * E);
  }
  return s * far_field_series(m).V / (pi * std::sqrt(P));
}

}  // namespace vring
