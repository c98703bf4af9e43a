#include "vring/external_field.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace vring {

namespace {

double log_factor(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::domain_error("external field: epsilon must lie in (0, 1)");
  }
  return std::abs(std::log(epsilon));
}

}  // namespace

ExternalField zero_field(double epsilon) {
  ExternalField f;
  f.evaluate = [](HalfPlanePoint, double) { return PlaneVector{0.0, 0.0}; };
  f.bound_constant = 0.0;
  f.lipschitz_constant = 0.0;
  f.epsilon = epsilon;
  f.name = "zero";
  return f;
}

ExternalField constant_axial_field(double c, double epsilon) {
  const double value = c / log_factor(epsilon);
  ExternalField f;
  f.evaluate = [value](HalfPlanePoint, double) { return PlaneVector{value, 0.0}; };
  f.bound_constant = std::abs(c);
  f.lipschitz_constant = 0.0;
  f.epsilon = epsilon;
  f.name = "constant-axial";
  return f;
}

FieldValidationReport validate_external_field(const ExternalField& field, const ProbeBox& box,
                                              int samples_per_side, double t) {
  if (!field.evaluate) {
    throw std::invalid_argument("validate_external_field: field has no evaluator");
  }
  if (samples_per_side < 2) {
    throw std::invalid_argument("validate_external_field: need at least 2 samples per side");
  }
  if (!(box.z_max > box.z_min) || !(box.r_max > box.r_min) || !(box.r_min > 0.0)) {
    throw std::invalid_argument("validate_external_field: probe box must be nondegenerate with r_min > 0");
  }

  const double scale = 1.0 / log_factor(field.epsilon);
  const int n = samples_per_side;
  const double dz = (box.z_max - box.z_min) / (n - 1);
  const double dr = (box.r_max - box.r_min) / (n - 1);

  std::vector<HalfPlanePoint> grid;
  grid.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      grid.push_back({box.z_min + i * dz, box.r_min + j * dr});
    }
  }

  FieldValidationReport report;

  // Pointwise bound over the grid.
  for (const auto& p : grid) {
    report.worst_bound = std::max(report.worst_bound, norm(field.evaluate(p, t)));
  }
  report.bound_ok = report.worst_bound <= field.bound_constant * scale * (1.0 + 1e-12) + 1e-300;

  // Lipschitz modulus: grid neighbors plus seeded random pairs.
  auto slope = [&](const HalfPlanePoint& a, const HalfPlanePoint& b) {
    const double dist = distance(a, b);
    if (dist <= 0.0) return 0.0;
    return norm(field.evaluate(a, t) - field.evaluate(b, t)) / dist;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      const auto& a = grid[static_cast<std::size_t>(i) * n + j];
      const auto& b = grid[static_cast<std::size_t>(i) * n + j + 1];
      report.worst_lipschitz = std::max(report.worst_lipschitz, slope(a, b));
      const auto& c = grid[static_cast<std::size_t>(j) * n + i];
      const auto& d = grid[static_cast<std::size_t>(j + 1) * n + i];
      report.worst_lipschitz = std::max(report.worst_lipschitz, slope(c, d));
    }
  }
  std::mt19937_64 rng(0x5eedb0c5u);
  std::uniform_real_distribution<double> uz(box.z_min, box.z_max);
  std::uniform_real_distribution<double> ur(box.r_min, box.r_max);
  for (int k = 0; k < 256; ++k) {
    const HalfPlanePoint a{uz(rng), ur(rng)};
    const HalfPlanePoint b{uz(rng), ur(rng)};
    report.worst_lipschitz = std::max(report.worst_lipschitz, slope(a, b));
  }
  report.lipschitz_ok =
      report.worst_lipschitz <= field.lipschitz_constant * scale * (1.0 + 1e-9) + 1e-300;

  // Weighted divergence div(r F) = d_z(r F1) + d_r(r F2) by central differences.
  // The threshold absorbs the cancellation error of subtracting two nearly
  // equal field values at spacing h.
  const double h_fd = 1e-5;
  report.divergence_threshold = 1e-6 * (field.bound_constant * scale) / h_fd;
  for (const auto& p : grid) {
    if (p.r <= h_fd) continue;
    const PlaneVector fzp = field.evaluate({p.z + h_fd, p.r}, t);
    const PlaneVector fzm = field.evaluate({p.z - h_fd, p.r}, t);
    const PlaneVector frp = field.evaluate({p.z, p.r + h_fd}, t);
    const PlaneVector frm = field.evaluate({p.z, p.r - h_fd}, t);
    const double div = p.r * (fzp.c1 - fzm.c1) / (2.0 * h_fd) +
                       ((p.r + h_fd) * frp.c2 - (p.r - h_fd) * frm.c2) / (2.0 * h_fd);
    report.worst_divergence = std::max(report.worst_divergence, std::abs(div));
  }
  report.divergence_ok = report.worst_divergence <= report.divergence_threshold + 1e-300;

  return report;
}

}  // namespace vring
