#include "vring/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vring/diagnostics.hpp"
#include "vring/io_util.hpp"

namespace vring {

namespace {

double log_factor(double epsilon) { return std::abs(std::log(epsilon)); }

void require_descending(const std::vector<double>& epsilons, const char* who) {
  for (const double e : epsilons) {
    if (!(e > 0.0) || !(e < 1.0)) {
      throw std::invalid_argument(std::string(who) + ": epsilons must lie in (0, 1)");
    }
  }
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (!(epsilons[i] < epsilons[i - 1])) {
      throw std::invalid_argument(std::string(who) + ": epsilons must be strictly decreasing");
    }
  }
}

}  // namespace

HalfPlanePoint predicted_center(const PredictedTrajectory& traj, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("predicted_center: t must be non-negative");
  }
  return HalfPlanePoint{traj.zeta0.z + traj.speed() * t, traj.zeta0.r};
}

double trajectory_error(const TimeSeries& series, const PredictedTrajectory& traj) {
  if (series.records.empty()) {
    throw std::invalid_argument("trajectory_error: empty series");
  }
  double worst = 0.0;
  for (const auto& rec : series.records) {
    const HalfPlanePoint zeta = predicted_center(traj, rec.t);
    const double dz = rec.B.c1 - zeta.z;
    const double dr = rec.B.c2 - zeta.r;
    worst = std::max(worst, std::sqrt(dz * dz + dr * dr));
  }
  return worst;
}

const char* to_string(BoundVerdict verdict) {
  switch (verdict) {
    case BoundVerdict::bounded: return "bounded";
    case BoundVerdict::growing: return "growing";
    case BoundVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

BoundCheck make_bound_check(std::string name, double exponent, const std::vector<double>& epsilons,
                            const std::vector<double>& values, double slack) {
  if (epsilons.size() != values.size()) {
    throw std::invalid_argument("make_bound_check: epsilons and values must align");
  }
  require_descending(epsilons, "make_bound_check");

  BoundCheck check;
  check.name = std::move(name);
  check.exponent = exponent;
  check.epsilons = epsilons;
  check.values = values;
  check.scaled.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    check.scaled.push_back(values[i] * std::pow(log_factor(epsilons[i]), exponent));
  }
  check.fitted_constant = check.scaled.empty()
                              ? 0.0
                              : *std::max_element(check.scaled.begin(), check.scaled.end());
  if (check.scaled.size() < 2) {
    check.verdict = BoundVerdict::inconclusive;
    return check;
  }
  bool ok = true;
  for (std::size_t i = 1; i < check.scaled.size(); ++i) {
    if (check.scaled[i] > (1.0 + slack) * check.scaled[i - 1]) ok = false;
  }
  check.verdict = ok ? BoundVerdict::bounded : BoundVerdict::growing;
  return check;
}

BoundCheck check_radial_localization(const std::vector<double>& epsilons,
                                     const std::vector<double>& max_radial_devs, double k,
                                     double slack) {
  if (!(k > 0.0) || !(k < 0.25)) {
    throw std::invalid_argument("check_radial_localization: k must lie in (0, 1/4)");
  }
  return make_bound_check("radial_localization", k, epsilons, max_radial_devs, slack);
}

std::pair<BoundCheck, BoundCheck> check_moment_bounds(const std::vector<double>& epsilons,
                                                      const std::vector<double>& terminal_I,
                                                      const std::vector<double>& terminal_J,
                                                      double slack) {
  return {make_bound_check("moment_I", 2.0, epsilons, terminal_I, slack),
          make_bound_check("moment_J", 1.0, epsilons, terminal_J, slack)};
}

BoundCheck check_concentration(const std::vector<double>& epsilons,
                               const std::vector<double>& fractions, double slack) {
  // Rescale the missing mass by log |log eps|; additionally require the raw
  // fractions to be non-decreasing as epsilon decreases.
  if (epsilons.size() != fractions.size()) {
    throw std::invalid_argument("check_concentration: epsilons and fractions must align");
  }
  require_descending(epsilons, "check_concentration");
  BoundCheck check;
  check.name = "concentration";
  check.exponent = 0.0;
  check.epsilons = epsilons;
  check.values = fractions;
  check.scaled.reserve(fractions.size());
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    check.scaled.push_back((1.0 - fractions[i]) * std::log(log_factor(epsilons[i])));
  }
  check.fitted_constant = check.scaled.empty()
                              ? 0.0
                              : *std::max_element(check.scaled.begin(), check.scaled.end());
  if (fractions.size() < 2) {
    check.verdict = BoundVerdict::inconclusive;
    return check;
  }
  bool ok = true;
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    if (fractions[i] < fractions[i - 1] - 1e-9) ok = false;
    if (check.scaled[i] > (1.0 + slack) * check.scaled[i - 1]) ok = false;
  }
  check.verdict = ok ? BoundVerdict::bounded : BoundVerdict::growing;
  return check;
}

bool ConvergenceReport::pass() const {
  if (!complete) return false;
  for (const BoundCheck* check :
       {&radial_check, &moment_I, &moment_J, &concentration_check}) {
    if (check->verdict == BoundVerdict::growing) return false;
  }
  if (rows.size() >= 2 && excess_variation > slack) return false;
  return true;
}

ConvergenceReport run_epsilon_study(const LadderSpec& spec) {
  require_descending(spec.epsilons, "run_epsilon_study");
  if (spec.epsilons.empty()) {
    throw std::invalid_argument("run_epsilon_study: empty ladder");
  }
  if (spec.rings.empty()) {
    throw std::invalid_argument("run_epsilon_study: no rings configured");
  }

  ConvergenceReport report;
  report.slack = spec.slack;
  report.min_fraction_required = spec.min_fraction;
  report.complete = true;

  for (const double eps : spec.epsilons) {
    LadderRow row;
    row.epsilon = eps;
    if (spec.on_progress) {
      std::ostringstream msg;
      msg << "ladder rung epsilon = " << eps;
      spec.on_progress(msg.str());
    }

    std::vector<RingSpec> rings = spec.rings;
    for (auto& ring : rings) {
      ring.epsilon = 0.0;  // inherit the rung epsilon
      if (spec.resolution > 0) ring.resolution = spec.resolution;
    }

    try {
      VortexSystem system = build_initial_data(rings, eps);
      row.particles = static_cast<int>(system.particles.size());

      RunSpec run_spec;
      run_spec.reg.delta = spec.delta_ratio * eps;
      run_spec.dt_factor = spec.dt_factor;
      run_spec.snapshot_every = spec.snapshot_every;
      run_spec.threads = spec.threads;
      run_spec.guard = spec.guard;

      std::vector<PredictedTrajectory> predictions;
      predictions.reserve(rings.size());
      for (const auto& ring : rings) {
        predictions.push_back({ring.center, ring.intensity});
      }
      row.ring_errors.assign(rings.size(), 0.0);

      run_spec.on_snapshot = [&](const VortexSystem& s, const DiagnosticsRecord& rec) {
        for (const auto& p : s.particles) {
          const double r0 = rings[static_cast<std::size_t>(p.ring_id)].center.r;
          row.max_radial_dev = std::max(row.max_radial_dev, std::abs(p.position.r - r0));
        }
        for (std::size_t i = 0; i < rings.size(); ++i) {
          const PlaneVector bi = ring_center(s, static_cast<int>(i));
          const HalfPlanePoint zi = predicted_center(predictions[i], rec.t);
          const double dz = bi.c1 - zi.z;
          const double dr = bi.c2 - zi.r;
          row.ring_errors[i] = std::max(row.ring_errors[i], std::sqrt(dz * dz + dr * dr));
        }
      };

      const ExternalField field =
          spec.field_factory ? spec.field_factory(eps) : zero_field(eps);
      const TimeSeries series = run(system, field, spec.horizon, run_spec);

      const DiagnosticsRecord& first = series.records.front();
      const DiagnosticsRecord& last = series.records.back();
      row.dt = series.dt;
      row.steps = row.dt > 0.0 ? std::lround(spec.horizon / row.dt) : 0;
      row.mean_speed = (last.B.c1 - first.B.c1) / spec.horizon;
      row.speed_ratio = row.mean_speed / predictions.front().speed();
      row.excess = (row.speed_ratio - 1.0) * log_factor(eps);
      row.trajectory_error_max =
          *std::max_element(row.ring_errors.begin(), row.ring_errors.end());
      row.terminal_I = last.I_axial;
      row.terminal_J = last.J_central;
      row.fraction = last.concentration.fraction;
      row.q_self = self_induction_Q(system, run_spec.reg);

      for (std::size_t i = 0; i < rings.size(); ++i) {
        const PlaneVector bi = ring_center(system, static_cast<int>(i));
        row.radial_drift =
            std::max(row.radial_drift, std::abs(bi.c2 - rings[i].center.r));
      }

      double r_dev = 0.0;
      for (const auto& p : system.particles) {
        if (p.ring_id != 0) continue;
        r_dev = std::max(r_dev, std::abs(p.position.r - rings[0].center.r));
      }
      row.radial_width = 2.0 * r_dev;
      row.axial_width = 2.0 * eps * log_factor(eps);
    } catch (const NumericalAbort& abort) {
      row.aborted = true;
      row.abort_message = abort.what();
      report.complete = false;
    }
    report.rows.push_back(std::move(row));
  }

  if (report.complete) {
    std::vector<double> devs, terminal_I, terminal_J, fractions, excesses, ratios;
    for (const auto& row : report.rows) {
      devs.push_back(row.max_radial_dev);
      terminal_I.push_back(row.terminal_I);
      terminal_J.push_back(row.terminal_J);
      fractions.push_back(row.fraction);
      excesses.push_back(row.excess);
      ratios.push_back(row.speed_ratio);
    }
    report.radial_check =
        check_radial_localization(spec.epsilons, devs, spec.k_radial, spec.slack);
    auto moments = check_moment_bounds(spec.epsilons, terminal_I, terminal_J, spec.slack);
    report.moment_I = std::move(moments.first);
    report.moment_J = std::move(moments.second);
    report.concentration_check = check_concentration(spec.epsilons, fractions, spec.slack);

    report.speeds_above_one = std::all_of(ratios.begin(), ratios.end(),
                                          [](double r) { return r > 1.0; });
    report.speeds_decreasing = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) {
      if (!(ratios[i] < ratios[i - 1])) report.speeds_decreasing = false;
    }
    if (excesses.size() >= 2) {
      const double lo = *std::min_element(excesses.begin(), excesses.end());
      const double hi = *std::max_element(excesses.begin(), excesses.end());
      double mean = 0.0;
      for (const double e : excesses) mean += e;
      mean /= static_cast<double>(excesses.size());
      report.excess_variation = mean != 0.0 ? (hi - lo) / std::abs(mean) : 0.0;
    }
    report.radial_drift_ok =
        std::all_of(report.rows.begin(), report.rows.end(),
                    [&](const LadderRow& r) { return r.radial_drift <= spec.radial_drift_tol; });
    report.anisotropy_ok =
        std::all_of(report.rows.begin(), report.rows.end(),
                    [](const LadderRow& r) { return r.radial_width < r.axial_width; });
    report.ring_errors_decreasing = true;
    const std::size_t ring_count = report.rows.front().ring_errors.size();
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      for (std::size_t k = 0; k < ring_count; ++k) {
        if (!(report.rows[i].ring_errors[k] < report.rows[i - 1].ring_errors[k])) {
          report.ring_errors_decreasing = false;
        }
      }
    }
    report.min_fraction_measured = *std::min_element(fractions.begin(), fractions.end());
  }

  return report;
}

namespace {

nlohmann::json check_to_json(const BoundCheck& check) {
  return nlohmann::json{{"name", check.name},
                        {"exponent", check.exponent},
                        {"epsilons", check.epsilons},
                        {"values", check.values},
                        {"scaled", check.scaled},
                        {"fitted_constant", check.fitted_constant},
                        {"verdict", to_string(check.verdict)}};
}

}  // namespace

void write_report_json(const ConvergenceReport& report, const std::filesystem::path& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"epsilon", row.epsilon},
                    {"particles", row.particles},
                    {"steps", row.steps},
                    {"dt", row.dt},
                    {"mean_speed", row.mean_speed},
                    {"speed_ratio", row.speed_ratio},
                    {"excess", row.excess},
                    {"trajectory_error_max", row.trajectory_error_max},
                    {"ring_errors", row.ring_errors},
                    {"terminal_I", row.terminal_I},
                    {"terminal_J", row.terminal_J},
                    {"max_radial_dev", row.max_radial_dev},
                    {"axial_width", row.axial_width},
                    {"radial_width", row.radial_width},
                    {"radial_drift", row.radial_drift},
                    {"fraction", row.fraction},
                    {"q_self", row.q_self},
                    {"aborted", row.aborted},
                    {"abort_message", row.abort_message}});
  }
  const nlohmann::json doc{{"schema_version", 1},
                           {"complete", report.complete},
                           {"slack", report.slack},
                           {"min_fraction_required", report.min_fraction_required},
                           {"min_fraction_measured", report.min_fraction_measured},
                           {"excess_variation", report.excess_variation},
                           {"speeds_above_one", report.speeds_above_one},
                           {"speeds_decreasing", report.speeds_decreasing},
                           {"radial_drift_ok", report.radial_drift_ok},
                           {"anisotropy_ok", report.anisotropy_ok},
                           {"ring_errors_decreasing", report.ring_errors_decreasing},
                           {"pass", report.pass()},
                           {"rows", rows},
                           {"checks",
                            {check_to_json(report.radial_check), check_to_json(report.moment_I),
                             check_to_json(report.moment_J),
                             check_to_json(report.concentration_check)}}};
  atomic_write_text(path, doc.dump(2) + "\n");
}

void write_report_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  std::size_t ring_count = 0;
  for (const auto& row : report.rows) ring_count = std::max(ring_count, row.ring_errors.size());

  std::ostringstream out;
  out << "epsilon,particles,steps,dt,mean_speed,speed_ratio,excess,trajectory_error_max,"
         "terminal_I,terminal_J,max_radial_dev,axial_width,radial_width,radial_drift,fraction,"
         "q_self,aborted";
  for (std::size_t i = 0; i < ring_count; ++i) out << ",ring_error_" << i;
  out << "\n";
  for (const auto& row : report.rows) {
    out << format_double(row.epsilon) << ',' << row.particles << ',' << row.steps << ','
        << format_double(row.dt)
        << ',' << format_double(row.mean_speed) << ',' << format_double(row.speed_ratio) << ','
        << format_double(row.excess) << ',' << format_double(row.trajectory_error_max) << ','
        << format_double(row.terminal_I) << ',' << format_double(row.terminal_J) << ','
        << format_double(row.max_radial_dev) << ',' << format_double(row.axial_width) << ','
        << format_double(row.radial_width) << ',' << format_double(row.radial_drift) << ','
        << format_double(row.fraction) << ',' << format_double(row.q_self) << ','
        << (row.aborted ? 1 : 0);
    for (std::size_t i = 0; i < ring_count; ++i) {
      out << ',' << (i < row.ring_errors.size() ? format_double(row.ring_errors[i]) : "0");
    }
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

}  // namespace vring
