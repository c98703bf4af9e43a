#pragma once

#include <cmath>

namespace vring {

inline constexpr double pi = 3.14159265358979323846;

/// Point x = (z, r) in the open meridional half-plane {r > 0}.
struct HalfPlanePoint {
  double z = 0.0;  ///< axial coordinate
  double r = 0.0;  ///< radial coordinate (distance to the symmetry axis)
};

/// Vector quantity (velocity, kernel value, field sample) in the (z, r) plane.
struct PlaneVector {
  double c1 = 0.0;  ///< axial component
  double c2 = 0.0;  ///< radial component
};

inline PlaneVector operator+(PlaneVector a, PlaneVector b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
inline PlaneVector operator-(PlaneVector a, PlaneVector b) { return {a.c1 - b.c1, a.c2 - b.c2}; }
inline PlaneVector operator-(PlaneVector a) { return {-a.c1, -a.c2}; }
inline PlaneVector operator*(double s, PlaneVector a) { return {s * a.c1, s * a.c2}; }
inline PlaneVector operator*(PlaneVector a, double s) { return {s * a.c1, s * a.c2}; }
inline PlaneVector& operator+=(PlaneVector& a, PlaneVector b) {
  a.c1 += b.c1;
  a.c2 += b.c2;
  return a;
}

inline double norm_sq(PlaneVector a) { return a.c1 * a.c1 + a.c2 * a.c2; }
inline double norm(PlaneVector a) { return std::sqrt(norm_sq(a)); }

/// Difference x - y viewed as a plane vector.
inline PlaneVector separation(HalfPlanePoint x, HalfPlanePoint y) { return {x.z - y.z, x.r - y.r}; }
inline double distance(HalfPlanePoint x, HalfPlanePoint y) { return norm(separation(x, y)); }

}  // namespace vring
