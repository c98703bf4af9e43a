#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vring/driver.hpp"

namespace vring {

/// Constant-speed axial motion the limit dynamics predicts for one ring:
/// z(t) = z0 + a t / (4 pi r0) at fixed radius r0.
struct PredictedTrajectory {
  HalfPlanePoint zeta0{0.0, 1.0};
  double intensity = 1.0;
  double speed() const { return intensity / (4.0 * pi * zeta0.r); }
};

HalfPlanePoint predicted_center(const PredictedTrajectory& traj, double t);

/// Max over snapshots of |B(t) - zeta(t)|.
double trajectory_error(const TimeSeries& series, const PredictedTrajectory& traj);

enum class BoundVerdict { bounded, growing, inconclusive };
const char* to_string(BoundVerdict verdict);

/// Boundedness trend of a measured quantity across a descending epsilon
/// ladder: the rescaled values value * |log eps|^exponent must be
/// non-increasing within the multiplicative slack.
struct BoundCheck {
  std::string name;
  double exponent = 0.0;
  std::vector<double> epsilons;
  std::vector<double> values;
  std::vector<double> scaled;
  double fitted_constant = 0.0;  ///< max of the rescaled values
  BoundVerdict verdict = BoundVerdict::inconclusive;
};

BoundCheck make_bound_check(std::string name, double exponent, const std::vector<double>& epsilons,
                            const std::vector<double>& values, double slack = 0.25);

/// max_t max_j |r_j - r0| per epsilon, rescaled with exponent k in (0, 1/4).
BoundCheck check_radial_localization(const std::vector<double>& epsilons,
                                     const std::vector<double>& max_radial_devs, double k,
                                     double slack = 0.25);

/// Terminal I with exponent 2 and terminal J with exponent 1.
std::pair<BoundCheck, BoundCheck> check_moment_bounds(const std::vector<double>& epsilons,
                                                      const std::vector<double>& terminal_I,
                                                      const std::vector<double>& terminal_J,
                                                      double slack = 0.25);

/// Concentration trend: fractions non-decreasing as epsilon decreases and
/// (1 - fraction) log |log eps| bounded within the slack.
BoundCheck check_concentration(const std::vector<double>& epsilons,
                               const std::vector<double>& fractions, double slack = 0.25);

/// One epsilon rung of a convergence study.
struct LadderRow {
  double epsilon = 0.0;
  int particles = 0;
  long steps = 0;
  double dt = 0.0;
  double mean_speed = 0.0;        ///< (B1(T) - B1(0)) / T
  double speed_ratio = 0.0;       ///< mean_speed / (a / (4 pi r0)) of ring 0
  double excess = 0.0;            ///< (speed_ratio - 1) |log eps|
  double trajectory_error_max = 0.0;
  std::vector<double> ring_errors;  ///< per-ring max |B_i(t) - zeta_i(t)|
  double terminal_I = 0.0;
  double terminal_J = 0.0;
  double max_radial_dev = 0.0;  ///< max over snapshots of max_j |r_j - r0(ring of j)|
  /// Width of the axial band around the concentration-disk center within
  /// which the terminal vorticity fraction is certified: 2 eps |log eps|.
  /// Axially no sharper support scale is available, so this is the honest
  /// terminal containment width in z.
  double axial_width = 0.0;
  /// Measured terminal radial support width of ring 0 around its limit
  /// circle: 2 max_j |r_j(T) - r0|.  The radial/axial comparison of these two
  /// widths quantifies the anisotropy of the localization (sharp support
  /// control in r, concentration-only control in z).
  double radial_width = 0.0;
  double radial_drift = 0.0;    ///< max over rings of |ring B2(T) - r0|
  double fraction = 0.0;        ///< terminal concentration fraction
  double q_self = 0.0;          ///< terminal self-induction functional
  bool aborted = false;
  std::string abort_message;
};

/// Shared setup for every rung: rings are re-discretized per epsilon at a
/// fixed per-core resolution, delta tracks epsilon, dt comes from the common
/// step policy.
struct LadderSpec {
  std::vector<double> epsilons;  ///< strictly decreasing, in (0, 1)
  std::vector<RingSpec> rings;   ///< template; epsilon/resolution overridden per rung
  double horizon = 1.0;
  double delta_ratio = 0.5;  ///< delta = delta_ratio * epsilon
  double dt_factor = 0.2;
  int resolution = 16;  ///< particles across each core diameter (0 = keep template)
  int snapshot_every = 4;
  int threads = 1;
  double slack = 0.25;
  double k_radial = 0.2;
  double min_fraction = 0.8;
  double radial_drift_tol = 5e-3;
  GuardPolicy guard;
  /// Optional per-epsilon external field; default is the zero field.
  std::function<ExternalField(double epsilon)> field_factory;
  std::function<void(const std::string&)> on_progress;
};

struct ConvergenceReport {
  std::vector<LadderRow> rows;
  BoundCheck radial_check;
  BoundCheck moment_I;
  BoundCheck moment_J;
  BoundCheck concentration_check;
  double excess_variation = 0.0;  ///< (max - min) / mean of the excess column
  bool speeds_above_one = false;
  bool speeds_decreasing = false;
  bool radial_drift_ok = false;
  bool anisotropy_ok = false;         ///< radial width < axial width on every row
  bool ring_errors_decreasing = false;  ///< per ring, strictly decreasing down the ladder
  double min_fraction_measured = 0.0;
  bool complete = false;
  double slack = 0.25;
  double min_fraction_required = 0.8;

  /// The harness gate: every trend verdict non-growing, the speed fit within
  /// slack, and all runs finished.
  bool pass() const;
};

ConvergenceReport run_epsilon_study(const LadderSpec& spec);

void write_report_json(const ConvergenceReport& report, const std::filesystem::path& path);
void write_report_csv(const ConvergenceReport& report, const std::filesystem::path& path);

}  // namespace vring
