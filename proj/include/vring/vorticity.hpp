#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vring/geometry.hpp"

namespace vring {

/// One Lagrangian blob carrying a share of the scaled vorticity mass.
struct Particle {
  HalfPlanePoint position;
  double gamma = 0.0;  ///< weight (signed), units of scaled vorticity mass
  int ring_id = 0;
};

enum class RingProfile { uniform_disk, truncated_gaussian };

/// Description of one initial ring core before discretization.
struct RingSpec {
  HalfPlanePoint center;                            ///< core center (z0, r0), r0 > epsilon
  double epsilon = 0.0;                             ///< core radius; 0 = inherit the global one
  double intensity = 1.0;                           ///< target scaled circulation a
  RingProfile profile = RingProfile::uniform_disk;  ///< vorticity profile inside the core
  int resolution = 20;                              ///< particles across the core diameter
};

/// Raised on invalid ring layouts or malformed configuration input.
class ConfigurationError : public std::runtime_error {
 public:
  explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

/// Optional admissibility check on mutual ring distances: all initial radii
/// above 2D and pairwise radius gaps at least 2D.
struct SeparationPolicy {
  enum class Mode { off, warn, error };
  Mode mode = Mode::off;
  double D = 0.0;
};

/// The full particle state at one instant.
struct VortexSystem {
  std::vector<Particle> particles;  ///< grouped by ring, ascending ring_id
  std::vector<RingSpec> rings;      ///< retained ring descriptions (guards, targets)
  double epsilon = 0.0;
  double time = 0.0;

  int ring_count() const { return static_cast<int>(rings.size()); }
  double total_weight() const;
  double ring_weight(int ring_id) const;
};

/// Discretizes the rings into particles on symmetric layouts.  Weights are
/// rescaled per ring so each ring's weight sum reproduces
/// intensity / |log epsilon| bit-exactly under left-to-right summation.
/// Throws ConfigurationError for cores touching the axis, overlapping cores,
/// or separation-policy violations in error mode; warn-mode findings are
/// appended to *warnings when provided.
VortexSystem build_initial_data(const std::vector<RingSpec>& rings, double epsilon,
                                const SeparationPolicy& policy = {},
                                std::vector<std::string>* warnings = nullptr);

/// Weighted sum  sum_j gamma_j f(x_j)  of an observable over the particles.
double integrate_observable(const VortexSystem& system,
                            const std::function<double(HalfPlanePoint)>& f);

/// Weight outside the radial band of half-width h around center_r
/// (strict inequality |r - center_r| > h).
double tail_mass(const VortexSystem& system, double center_r, double h);

/// Radial cutoff profile: 1 on [0, R], 0 beyond R + h, quintic blend between.
struct MollifierSpec {
  double R = 0.0;
  double h = 0.0;
};

/// Bounds realized by the quintic blend: sup |W'| = slope/h and W' has
/// Lipschitz constant curvature/h^2.
inline constexpr double mollifier_slope_bound = 1.875;          // 15/8
inline constexpr double mollifier_curvature_bound = 5.7735026918962584;  // 10/sqrt(3)

double mollifier_W(const MollifierSpec& spec, double s);

/// Smooth tail weight  sum_j gamma_j (1 - W(x_{j,2} - center_r)).
double mollified_tail(const VortexSystem& system, double center_r, const MollifierSpec& spec);

/// Kernel-density estimate of the scaled vorticity at a point, using the
/// compact biweight bump (3/pi)(1 - rho^2)^2 at bandwidth bw.
double reconstruct_density(const VortexSystem& system, HalfPlanePoint x, double bandwidth);

/// Snapshot serialization: CSV with header ring_id,z,r,gamma, one particle
/// per row, doubles printed so they read back bit-exactly.
void write_snapshot_csv(const VortexSystem& system, const std::filesystem::path& path);
std::vector<Particle> read_snapshot_csv(const std::filesystem::path& path);

}  // namespace vring
