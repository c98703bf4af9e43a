#include "vring/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vring/io_util.hpp"

namespace vring {
namespace {

// |log epsilon| for epsilon in (0, 1).
double abs_log(double epsilon) { return -std::log(epsilon); }

void append_ring_particles(std::vector<Particle>& out, const RingSpec& ring, double epsilon,
                           int ring_id) {
  const std::size_t first = out.size();
  if (ring.profile == RingProfile::uniform_disk) {
    // Cell-centered square lattice over the core, symmetric in both offsets
    // so the layout is exactly mirror-symmetric about the ring center.
    const double h = 2.0 * epsilon / ring.resolution;
    const int span = ring.resolution / 2 + 1;
    for (int i = -span; i < span; ++i) {
      const double oz = (i + 0.5) * h;
      for (int j = -span; j < span; ++j) {
        const double orr = (j + 0.5) * h;
        if (oz * oz + orr * orr >= epsilon * epsilon) continue;
        out.push_back(
            {{ring.center.z + oz, ring.center.r + orr}, 1.0, ring_id});
      }
    }
  } else {
    // Radially stratified shells with even per-shell counts and half-offset
    // angles: mirror-symmetric in both the axial and radial directions.
    const double sigma = 0.5 * epsilon;
    const int n_shells = std::max(3, ring.resolution / 2);
    const double dr = epsilon / n_shells;
    for (int m = 0; m < n_shells; ++m) {
      const double rho = (m + 0.5) * dr;
      const int count = 2 * std::max<long>(2, std::lround(pi * (m + 0.5)));
      const double cell = 2.0 * pi * rho * dr / count;
      const double w = std::exp(-0.5 * rho * rho / (sigma * sigma)) * cell;
      for (int k = 0; k < count; ++k) {
        const double phi = (k + 0.5) * 2.0 * pi / count;
        out.push_back({{ring.center.z + rho * std::cos(phi),
                        ring.center.r + rho * std::sin(phi)},
                       w,
                       ring_id});
      }
    }
  }

  // Rescale so the ring's left-to-right weight sum reproduces the target
  // intensity / |log epsilon| bit-exactly: scale everything, then solve for
  // the last weight (the subtraction is exact by Sterbenz's lemma).
  const double target = ring.intensity / abs_log(epsilon);
  double raw = 0.0;
  for (std::size_t j = first; j < out.size(); ++j) raw += out[j].gamma;
  const double scale = target / raw;
  for (std::size_t j = first; j < out.size(); ++j) out[j].gamma *= scale;
  double partial = 0.0;
  for (std::size_t j = first; j + 1 < out.size(); ++j) partial += out[j].gamma;
  out.back().gamma = target - partial;
}

}  // namespace

double VortexSystem::total_weight() const {
  double sum = 0.0;
  for (const Particle& p : particles) sum += p.gamma;
  return sum;
}

double VortexSystem::ring_weight(int ring_id) const {
  double sum = 0.0;
  for (const Particle& p : particles)
    if (p.ring_id == ring_id) sum += p.gamma;
  return sum;
}

VortexSystem build_initial_data(const std::vector<RingSpec>& rings, double epsilon,
                                const SeparationPolicy& policy,
                                std::vector<std::string>* warnings) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw ConfigurationError("build_initial_data: epsilon must lie in (0, 1)");
  if (rings.empty()) throw ConfigurationError("build_initial_data: no rings given");

  for (std::size_t i = 0; i < rings.size(); ++i) {
    const RingSpec& ring = rings[i];
    if (ring.epsilon != 0.0 && ring.epsilon != epsilon)
      throw ConfigurationError("ring " + std::to_string(i) +
                               ": per-ring core radius must match the global epsilon");
    if (!(ring.center.r > epsilon))
      throw ConfigurationError("ring " + std::to_string(i) +
                               ": core touches the axis (needs center.r > epsilon)");
    if (ring.resolution < 4)
      throw ConfigurationError("ring " + std::to_string(i) + ": resolution must be at least 4");
    if (ring.intensity == 0.0)
      throw ConfigurationError("ring " + std::to_string(i) + ": intensity must be nonzero");
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(ring.center, rings[j].center) < 2.0 * epsilon)
        throw ConfigurationError("rings " + std::to_string(j) + " and " + std::to_string(i) +
                                 ": cores overlap");
    }
  }

  if (policy.mode != SeparationPolicy::Mode::off) {
    std::vector<std::string> findings;
    for (std::size_t i = 0; i < rings.size(); ++i) {
      if (!(rings[i].center.r > 2.0 * policy.D))
        findings.push_back("ring " + std::to_string(i) + ": radius not above 2D");
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(rings[i].center.r - rings[j].center.r) < 2.0 * policy.D)
          findings.push_back("rings " + std::to_string(j) + " and " + std::to_string(i) +
                             ": radial gap below 2D");
    }
    for (const std::string& finding : findings) {
      if (policy.mode == SeparationPolicy::Mode::error)
        throw ConfigurationError("separation check: " + finding);
      if (warnings) warnings->push_back("separation check: " + finding);
    }
  }

  VortexSystem system;
  system.epsilon = epsilon;
  system.rings = rings;
  for (RingSpec& ring : system.rings) ring.epsilon = epsilon;
  for (std::size_t i = 0; i < system.rings.size(); ++i)
    append_ring_particles(system.particles, system.rings[i], epsilon, static_cast<int>(i));
  return system;
}

double integrate_observable(const VortexSystem& system,
                            const std::function<double(HalfPlanePoint)>& f) {
  double sum = 0.0;
  for (const Particle& p : system.particles) sum += p.gamma * f(p.position);
  return sum;
}

double tail_mass(const VortexSystem& system, double center_r, double h) {
  double sum = 0.0;
  for (const Particle& p : system.particles)
    if (std::abs(p.position.r - center_r) > h) sum += p.gamma;
  return sum;
}

double mollifier_W(const MollifierSpec& spec, double s) {
  if (!(spec.R >= 0.0) || !(spec.h > 0.0))
    throw std::domain_error("mollifier_W: requires R >= 0 and h > 0");
  const double t = (std::abs(s) - spec.R) / spec.h;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double mollified_tail(const VortexSystem& system, double center_r, const MollifierSpec& spec) {
  double sum = 0.0;
  for (const Particle& p : system.particles)
    sum += p.gamma * (1.0 - mollifier_W(spec, p.position.r - center_r));
  return sum;
}

double reconstruct_density(const VortexSystem& system, HalfPlanePoint x, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::domain_error("reconstruct_density: bandwidth must be > 0");
  const double inv_bw2 = 1.0 / (bandwidth * bandwidth);
  double sum = 0.0;
  for (const Particle& p : system.particles) {
    const double rho2 = norm_sq(separation(x, p.position)) * inv_bw2;
    if (rho2 >= 1.0) continue;
    const double t = 1.0 - rho2;
    sum += p.gamma * 3.0 / pi * t * t;
  }
  return sum * inv_bw2;
}

void write_snapshot_csv(const VortexSystem& system, const std::filesystem::path& path) {
  std::string body = "ring_id,z,r,gamma\n";
  for (const Particle& p : system.particles) {
    body += std::to_string(p.ring_id);
    body += ',';
    body += format_double(p.position.z);
    body += ',';
    body += format_double(p.position.r);
    body += ',';
    body += format_double(p.gamma);
    body += '\n';
  }
  atomic_write_text(path, body);
}

std::vector<Particle> read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("read_snapshot_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "ring_id,z,r,gamma")
    throw ConfigurationError("read_snapshot_csv: bad header in " + path.string());
  std::vector<Particle> particles;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    Particle p;
    try {
      if (!std::getline(row, field, ',')) throw std::invalid_argument(line);
      p.ring_id = std::stoi(field);
      if (!std::getline(row, field, ',')) throw std::invalid_argument(line);
      p.position.z = std::stod(field);
      if (!std::getline(row, field, ',')) throw std::invalid_argument(line);
      p.position.r = std::stod(field);
      if (!std::getline(row, field, ',')) throw std::invalid_argument(line);
      p.gamma = std::stod(field);
    } catch (const std::exception&) {
      throw ConfigurationError("read_snapshot_csv: malformed row '" + line + "'");
    }
    particles.push_back(p);
  }
  return particles;
}

}  // namespace vring
