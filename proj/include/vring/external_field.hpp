#pragma once

#include <functional>
#include <string>

#include "vring/geometry.hpp"

namespace vring {

/// Prescribed background drift F with its admissibility constants.  The
/// physical field carries the 1/|log epsilon| normalization; bound_constant
/// and lipschitz_constant describe |F| and the Lipschitz modulus in units of
/// that factor.
struct ExternalField {
  std::function<PlaneVector(HalfPlanePoint, double)> evaluate;
  double bound_constant = 0.0;      ///< C with |F| <= C / |log epsilon|
  double lipschitz_constant = 0.0;  ///< L with |F(x)-F(y)| <= L |x-y| / |log epsilon|
  double epsilon = 0.5;             ///< epsilon fixing the normalization
  std::string name = "zero";
};

ExternalField zero_field(double epsilon);

/// Uniform axial drift (c / |log epsilon|, 0): admissible with L = 0 and it
/// rigidly shifts every trajectory's axial speed by c / |log epsilon|.
ExternalField constant_axial_field(double c, double epsilon);

/// Axis-aligned probe region for field validation.
struct ProbeBox {
  double z_min, z_max, r_min, r_max;
};

struct FieldValidationReport {
  bool bound_ok = false;
  bool lipschitz_ok = false;
  bool divergence_ok = false;
  double worst_bound = 0.0;        ///< max sampled |F| (absolute units)
  double worst_lipschitz = 0.0;    ///< max sampled |dF| / |dx| (absolute units)
  double worst_divergence = 0.0;   ///< max sampled |div(r F)|
  double divergence_threshold = 0.0;
  bool pass() const { return bound_ok && lipschitz_ok && divergence_ok; }
};

/// Samples the declared bound, the Lipschitz modulus (grid neighbors plus
/// seeded random pairs) and the weighted divergence div(r F) by central
/// differences, against the field's declared constants.
FieldValidationReport validate_external_field(const ExternalField& field, const ProbeBox& box,
                                              int samples_per_side, double t = 0.0);

}  // namespace vring
