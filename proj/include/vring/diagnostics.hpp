#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "vring/dynamics.hpp"
#include "vring/external_field.hpp"
#include "vring/geometry.hpp"
#include "vring/quadrature.hpp"
#include "vring/vorticity.hpp"

namespace vring {

/// Best mass-concentration disk: center and enclosed fraction of total weight.
struct ConcentrationDisk {
  HalfPlanePoint q{0.0, 0.0};
  double fraction = 0.0;
};

/// Scalar and vector functionals of one particle snapshot.
struct DiagnosticsRecord {
  double t = 0.0;
  PlaneVector B{0.0, 0.0};   ///< center of vorticity (axial, radial)
  double I_axial = 0.0;      ///< second radial moment about B2
  double J_central = 0.0;    ///< full second moment about B
  double M0 = 0.0;           ///< total weight
  double M2 = 0.0;           ///< second radial moment about the axis
  double energy = 0.0;       ///< regularized interaction energy
  double R_t = 0.0;          ///< max radial deviation from B2
  std::vector<double> tail_masses;  ///< weight outside radial bands, one per h-level
  ConcentrationDisk concentration;
};

/// B = (sum gamma_j x_j) / (sum gamma_j).  Throws std::domain_error when the
/// total weight vanishes.
PlaneVector center_of_vorticity(const VortexSystem& system);

/// Center of vorticity of one ring's particles only.
PlaneVector ring_center(const VortexSystem& system, int ring_id);

/// I = sum gamma_j (r_j - B2)^2.
double axial_moment(const VortexSystem& system);

/// J = sum gamma_j |x_j - B|^2.
double central_moment(const VortexSystem& system);

/// R_t = max_j |r_j - B2|.  Throws std::domain_error on an empty system.
double support_radius(const VortexSystem& system);

/// (M0, M2) = (sum gamma_j, sum gamma_j r_j^2).  M0 is exactly conserved by
/// the dynamics; M2 is conserved by the regularized interaction and drifts
/// only through time discretization and external fields.
std::pair<double, double> conserved_quantities(const VortexSystem& system);

/// E = pi sum_{j,k} gamma_j gamma_k S_delta(x_j, x_k) with the same
/// separation-smoothed stream kernel the dynamics uses (diagonal included).
/// The closed elliptic form makes the quadrature spec unnecessary; the
/// parameter is accepted for interface stability and ignored.
double energy(const VortexSystem& system, const RegularizationSpec& reg,
              const QuadratureSpec& = {});

/// Predicted velocity of the center of vorticity: component 1 from the lift
/// and remainder double sums plus the external drift, component 2 from the
/// remainder double sum plus the drift.  The planar-kernel contribution
/// cancels pairwise and is omitted.  Evaluated at the system's own clock.
PlaneVector b_dot_prediction(const VortexSystem& system, const ExternalField& field,
                             const RegularizationSpec& reg, const QuadratureSpec& = {});

/// Discrete self-induction functional
///   Q = |log eps| sum_{j,k} gamma_j gamma_k log((1 + d_jk) / d_jk) / (4 pi r_j)
/// with the regularized distance d_jk = sqrt(|x_j - x_k|^2 + delta^2).
double self_induction_Q(const VortexSystem& system, const RegularizationSpec& reg);

/// Exhaustive search over candidate centers (every particle position, then B)
/// for the closed disk of the given radius holding the most weight; ties keep
/// the earliest candidate.
ConcentrationDisk concentration_disk(const VortexSystem& system, double radius);

struct DiagnosticsOptions {
  std::vector<double> tail_h;         ///< radial band half-widths for tail masses
  double concentration_radius = 0.0;  ///< 0 = use epsilon |log epsilon|
};

DiagnosticsRecord make_record(const VortexSystem& system, const RegularizationSpec& reg,
                              const DiagnosticsOptions& options = {});

/// Diagnostics records along one run, at fixed step cadence (plus the initial
/// and final instants).
struct TimeSeries {
  std::vector<DiagnosticsRecord> records;
  int cadence = 1;   ///< steps between interior records
  double dt = 0.0;   ///< fixed integrator step used by the run (0 if no steps)
};

/// CSV with fixed column order t,B1,B2,I_axial,J_central,M0,M2,E,R_t,q1,q2,
/// fraction,tail_0,...  Doubles are printed to full round-trip precision.
void write_series_csv(const TimeSeries& series, const std::filesystem::path& path);

}  // namespace vring
