#include "vring/driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace vring {

namespace {

void check_guard(const VortexSystem& system, const GuardPolicy& guard,
                 std::vector<bool>& warned, const RunSpec& spec) {
  if (guard.mode == GuardPolicy::Mode::off || system.rings.empty()) return;
  for (std::size_t i = 0; i < system.particles.size(); ++i) {
    const auto& p = system.particles[i];
    if (p.ring_id < 0 || p.ring_id >= static_cast<int>(system.rings.size())) continue;
    const double r0 = system.rings[static_cast<std::size_t>(p.ring_id)].center.r;
    if (p.position.r >= guard.lower * r0 && p.position.r <= guard.upper * r0) continue;

    const std::string message =
        "guard: ring " + std::to_string(p.ring_id) + " particle " + std::to_string(i) +
        " left the radial corridor [" + std::to_string(guard.lower * r0) + ", " +
        std::to_string(guard.upper * r0) + "] at t = " + std::to_string(system.time) +
        " (r = " + std::to_string(p.position.r) + ")";
    if (guard.mode == GuardPolicy::Mode::abort) {
      throw NumericalAbort(i, system.time, message);
    }
    const auto id = static_cast<std::size_t>(p.ring_id);
    if (!warned[id]) {
      warned[id] = true;
      if (spec.on_warning) spec.on_warning(message);
    }
  }
}

}  // namespace

TimeSeries run(VortexSystem& system, const ExternalField& field, double horizon,
               const RunSpec& spec) {
  if (horizon < 0.0 || !std::isfinite(horizon)) {
    throw std::invalid_argument("run: horizon must be non-negative and finite");
  }
  if (spec.snapshot_every < 1) {
    throw std::invalid_argument("run: snapshot_every must be at least 1");
  }
  if (!(spec.reg.delta > 0.0)) {
    throw std::invalid_argument("run: regularization delta must be positive");
  }

  TimeSeries series;
  series.cadence = spec.snapshot_every;
  std::vector<bool> warned(system.rings.empty() ? 0 : system.rings.size(), false);

  auto record = [&] {
    series.records.push_back(make_record(system, spec.reg, spec.diagnostics));
    if (spec.on_snapshot) spec.on_snapshot(system, series.records.back());
  };

  check_guard(system, spec.guard, warned, spec);
  record();
  if (horizon == 0.0 || system.particles.empty()) return series;

  // Fixed step: either the configured dt rounded to divide the horizon, or
  // the dt_factor * delta / max|u(0)| policy.
  double dt_raw = spec.integrator.dt;
  if (!(dt_raw > 0.0)) {
    const std::vector<PlaneVector> u0 = system_rhs(system, field, system.time, spec.reg,
                                                   spec.threads);
    double max_speed = 0.0;
    for (const auto& u : u0) max_speed = std::max(max_speed, norm(u));
    dt_raw = max_speed > 0.0 ? spec.dt_factor * spec.reg.delta / max_speed : horizon;
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(horizon / dt_raw - 1e-9)));
  const IntegratorSpec integrator{horizon / static_cast<double>(steps)};
  series.dt = integrator.dt;

  for (long s = 1; s <= steps; ++s) {
    rk4_step(system, field, spec.reg, integrator, spec.threads);
    check_guard(system, spec.guard, warned, spec);
    if (s % spec.snapshot_every == 0 || s == steps) record();
  }
  return series;
}

}  // namespace vring
