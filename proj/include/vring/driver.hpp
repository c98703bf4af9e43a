#pragma once

#include <functional>
#include <string>

#include "vring/diagnostics.hpp"
#include "vring/dynamics.hpp"
#include "vring/external_field.hpp"
#include "vring/vorticity.hpp"

namespace vring {

/// Corridor monitor on particle radii, per ring, relative to the ring's
/// initial radius r0: radii are expected to stay in [lower r0, upper r0].
struct GuardPolicy {
  enum class Mode { off, warn, abort };
  Mode mode = Mode::warn;
  double lower = 0.5;
  double upper = 1.5;
};

/// Everything run() needs besides the state, the field and the horizon.
struct RunSpec {
  RegularizationSpec reg;
  IntegratorSpec integrator;  ///< dt = 0 means derive it from dt_factor
  double dt_factor = 0.2;     ///< dt = dt_factor * delta / max |u(0)| when dt = 0
  int snapshot_every = 1;     ///< steps between diagnostic records
  int threads = 1;
  GuardPolicy guard;
  DiagnosticsOptions diagnostics;
  /// Invoked at every recorded snapshot, after the record is appended.
  std::function<void(const VortexSystem&, const DiagnosticsRecord&)> on_snapshot;
  /// Receives guard warnings (at most one per ring per run).
  std::function<void(const std::string&)> on_warning;
};

/// Integrates the system to time system.time + horizon with a fixed step that
/// divides the horizon exactly, recording diagnostics at the configured
/// cadence plus the initial and final instants.  The system is advanced in
/// place.  Horizon 0 yields exactly the initial record.
TimeSeries run(VortexSystem& system, const ExternalField& field, double horizon,
               const RunSpec& spec);

}  // namespace vring
