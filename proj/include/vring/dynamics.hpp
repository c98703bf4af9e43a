#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vring/external_field.hpp"
#include "vring/geometry.hpp"
#include "vring/vorticity.hpp"

namespace vring {

/// Blob regularization.  The interaction kernel is obtained from the exact
/// ring interaction by shifting the squared separation |x-y|^2 by delta^2
/// inside the stream function, which keeps the regularized field
/// divergence-free and preserves the exact pair antisymmetry of the weighted
/// radial components.
struct RegularizationSpec {
  double delta = 0.0;
};

struct IntegratorSpec {
  double dt = 0.0;
};

/// Short-range mollification of the interaction: below `cutoff` the stream
/// function is blended to zero over a band of width `blend_width` by a C^2
/// quintic, so the mollified kernel is still divergence-free.
struct MollifiedKernelSpec {
  double cutoff = 0.0;
  double blend_width = 0.0;
};

/// Thrown when a particle is pushed onto or across the axis r = 0 (or a
/// non-finite position appears): the motion is no longer representable.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(std::size_t particle_index, double time, const std::string& what_arg)
      : std::runtime_error(what_arg), index_(particle_index), time_(time) {}
  std::size_t particle_index() const { return index_; }
  double time() const { return time_; }

 private:
  std::size_t index_;
  double time_;
};

/// Regularized velocity induced at an arbitrary point by the whole particle
/// system; `x` may coincide with a particle position (delta > 0 keeps the
/// interaction finite there).
PlaneVector induced_velocity(const VortexSystem& system, const HalfPlanePoint& x,
                             const RegularizationSpec& reg);

/// Self-consistent particle velocities u_i = sum_j gamma_j H_delta(x_i, x_j),
/// including the j = i self-term.  The pair loop is organized in a fixed
/// chunk decomposition with per-chunk accumulators merged in chunk order, so
/// the result is bitwise identical for every thread count.
std::vector<PlaneVector> self_velocities(const VortexSystem& system, const RegularizationSpec& reg,
                                         int threads = 1);

/// Full right-hand side: self-induced velocities plus the external drift
/// evaluated at each particle.
std::vector<PlaneVector> system_rhs(const VortexSystem& system, const ExternalField& field,
                                    double t, const RegularizationSpec& reg, int threads = 1);

/// One classical Runge-Kutta 4 step of size dt, advancing positions and the
/// clock.  Throws NumericalAbort if any stage leaves the half-plane.
void rk4_step(VortexSystem& system, const ExternalField& field, const RegularizationSpec& reg,
              const IntegratorSpec& integrator, int threads = 1);

/// Value-returning form of rk4_step: weights untouched, positions advanced,
/// clock moved by dt.
VortexSystem step(const VortexSystem& system, const ExternalField& field,
                  const IntegratorSpec& integrator, const RegularizationSpec& reg,
                  int threads = 1);

/// Interaction kernel with the short-range mollification applied; reduces
/// exactly to the regular interaction at separation >= cutoff and vanishes
/// identically below cutoff - blend_width.
PlaneVector mollified_interaction(const HalfPlanePoint& x, const HalfPlanePoint& y,
                                  const MollifiedKernelSpec& spec);

}  // namespace vring
