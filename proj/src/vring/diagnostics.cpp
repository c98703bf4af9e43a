#include "vring/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>

#include "vring/elliptic.hpp"
#include "vring/io_util.hpp"

namespace vring {

namespace {

double total_weight_or_throw(const VortexSystem& system, const char* who) {
  double m0 = 0.0;
  for (const auto& p : system.particles) m0 += p.gamma;
  if (m0 == 0.0) {
    throw std::domain_error(std::string(who) + ": total weight vanishes");
  }
  return m0;
}

}  // namespace

PlaneVector center_of_vorticity(const VortexSystem& system) {
  const double m0 = total_weight_or_throw(system, "center_of_vorticity");
  double bz = 0.0, br = 0.0;
  for (const auto& p : system.particles) {
    bz += p.gamma * p.position.z;
    br += p.gamma * p.position.r;
  }
  return PlaneVector{bz / m0, br / m0};
}

PlaneVector ring_center(const VortexSystem& system, int ring_id) {
  double m0 = 0.0, bz = 0.0, br = 0.0;
  for (const auto& p : system.particles) {
    if (p.ring_id != ring_id) continue;
    m0 += p.gamma;
    bz += p.gamma * p.position.z;
    br += p.gamma * p.position.r;
  }
  if (m0 == 0.0) {
    throw std::domain_error("ring_center: ring has no weight");
  }
  return PlaneVector{bz / m0, br / m0};
}

double axial_moment(const VortexSystem& system) {
  const PlaneVector b = center_of_vorticity(system);
  double i = 0.0;
  for (const auto& p : system.particles) {
    const double dr = p.position.r - b.c2;
    i += p.gamma * dr * dr;
  }
  return i;
}

double central_moment(const VortexSystem& system) {
  const PlaneVector b = center_of_vorticity(system);
  double j = 0.0;
  for (const auto& p : system.particles) {
    const double dz = p.position.z - b.c1;
    const double dr = p.position.r - b.c2;
    j += p.gamma * (dz * dz + dr * dr);
  }
  return j;
}

double support_radius(const VortexSystem& system) {
  if (system.particles.empty()) {
    throw std::domain_error("support_radius: empty system");
  }
  const PlaneVector b = center_of_vorticity(system);
  double r_t = 0.0;
  for (const auto& p : system.particles) {
    r_t = std::max(r_t, std::abs(p.position.r - b.c2));
  }
  return r_t;
}

std::pair<double, double> conserved_quantities(const VortexSystem& system) {
  double m0 = 0.0, m2 = 0.0;
  for (const auto& p : system.particles) {
    m0 += p.gamma;
    m2 += p.gamma * p.position.r * p.position.r;
  }
  return {m0, m2};
}

double energy(const VortexSystem& system, const RegularizationSpec& reg, const QuadratureSpec&) {
  if (!(reg.delta > 0.0)) {
    throw std::invalid_argument("energy: regularization delta must be positive");
  }
  const double b_extra = reg.delta * reg.delta;
  const auto& ps = system.particles;
  double diag = 0.0, cross = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    diag += ps[j].gamma * ps[j].gamma * ring_stream(0.0, ps[j].position.r, ps[j].position.r, b_extra);
    for (std::size_t k = j + 1; k < ps.size(); ++k) {
      const double d2 = norm_sq(separation(ps[j].position, ps[k].position));
      cross += ps[j].gamma * ps[k].gamma *
               ring_stream(d2, ps[j].position.r, ps[k].position.r, b_extra);
    }
  }
  return pi * (diag + 2.0 * cross);
}

PlaneVector b_dot_prediction(const VortexSystem& system, const ExternalField& field,
                             const RegularizationSpec& reg, const QuadratureSpec&) {
  if (system.particles.empty()) {
    throw std::domain_error("b_dot_prediction: empty system");
  }
  if (!(reg.delta > 0.0)) {
    throw std::invalid_argument("b_dot_prediction: regularization delta must be positive");
  }
  const double m0 = total_weight_or_throw(system, "b_dot_prediction");
  const double b_extra = reg.delta * reg.delta;
  const auto& ps = system.particles;

  // sum_j gamma_j [ F(x_j) + sum_k gamma_k (H_delta - K_delta)(x_j, x_k) ]:
  // subtracting the regularized planar kernel from the full interaction keeps
  // exactly the lift + remainder parts whose double sum does not cancel.
  double acc1 = 0.0, acc2 = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const double gj = ps[j].gamma;
    const double rj = ps[j].position.r;
    const PairKernel self = ring_kernel_pair(0.0, 0.0, rj, rj, b_extra);
    acc1 += gj * gj * self.h1_xy;
    acc2 += gj * gj * self.h2_xy;
    for (std::size_t k = j + 1; k < ps.size(); ++k) {
      const double gk = ps[k].gamma;
      const PlaneVector w = separation(ps[j].position, ps[k].position);
      const PairKernel pk =
          ring_kernel_pair(w.c1, w.c2, rj, ps[k].position.r, b_extra);
      const double rho2 = norm_sq(w) + b_extra;
      const double k1 = -w.c2 / (2.0 * pi * rho2);  // K_delta components at +w
      const double k2 = w.c1 / (2.0 * pi * rho2);
      acc1 += gj * gk * ((pk.h1_xy - k1) + (pk.h1_yx + k1));
      acc2 += gj * gk * ((pk.h2_xy - k2) + (pk.h2_yx + k2));
    }
    if (field.evaluate) {
      const PlaneVector f = field.evaluate(ps[j].position, system.time);
      acc1 += gj * f.c1;
      acc2 += gj * f.c2;
    }
  }
  return PlaneVector{acc1 / m0, acc2 / m0};
}

double self_induction_Q(const VortexSystem& system, const RegularizationSpec& reg) {
  if (system.particles.empty()) {
    throw std::domain_error("self_induction_Q: empty system");
  }
  if (!(reg.delta > 0.0)) {
    throw std::invalid_argument("self_induction_Q: regularization delta must be positive");
  }
  if (!(system.epsilon > 0.0) || !(system.epsilon < 1.0)) {
    throw std::domain_error("self_induction_Q: system epsilon must lie in (0, 1)");
  }
  const double b_extra = reg.delta * reg.delta;
  const auto& ps = system.particles;
  double q = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const double lift_self = std::log((1.0 + reg.delta) / reg.delta);
    q += ps[j].gamma * ps[j].gamma * lift_self / (4.0 * pi * ps[j].position.r);
    for (std::size_t k = j + 1; k < ps.size(); ++k) {
      const double d = std::sqrt(norm_sq(separation(ps[j].position, ps[k].position)) + b_extra);
      const double lift = std::log((1.0 + d) / d);
      q += ps[j].gamma * ps[k].gamma * lift / (4.0 * pi) *
           (1.0 / ps[j].position.r + 1.0 / ps[k].position.r);
    }
  }
  return std::abs(std::log(system.epsilon)) * q;
}

ConcentrationDisk concentration_disk(const VortexSystem& system, double radius) {
  if (system.particles.empty()) {
    throw std::domain_error("concentration_disk: empty system");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("concentration_disk: radius must be positive");
  }
  const double m0 = total_weight_or_throw(system, "concentration_disk");
  const double radius_sq = radius * radius;

  std::vector<HalfPlanePoint> candidates;
  candidates.reserve(system.particles.size() + 1);
  for (const auto& p : system.particles) candidates.push_back(p.position);
  const PlaneVector b = center_of_vorticity(system);
  candidates.push_back({b.c1, b.c2});

  ConcentrationDisk best;
  bool first = true;
  for (const auto& c : candidates) {
    double enclosed = 0.0;
    for (const auto& p : system.particles) {
      const double dz = p.position.z - c.z;
      const double dr = p.position.r - c.r;
      if (dz * dz + dr * dr <= radius_sq) enclosed += p.gamma;
    }
    const double fraction = enclosed / m0;
    if (first || fraction > best.fraction) {
      best.q = c;
      best.fraction = fraction;
      first = false;
    }
  }
  return best;
}

DiagnosticsRecord make_record(const VortexSystem& system, const RegularizationSpec& reg,
                              const DiagnosticsOptions& options) {
  DiagnosticsRecord rec;
  rec.t = system.time;

  // A weightless cloud has no center of vorticity; report neutral values so
  // degenerate runs still produce a well-formed series.
  double weight = 0.0;
  for (const auto& p : system.particles) weight += p.gamma;
  if (weight == 0.0) {
    rec.tail_masses.assign(options.tail_h.size(), 0.0);
    return rec;
  }

  rec.B = center_of_vorticity(system);
  rec.I_axial = axial_moment(system);
  rec.J_central = central_moment(system);
  const auto [m0, m2] = conserved_quantities(system);
  rec.M0 = m0;
  rec.M2 = m2;
  rec.energy = energy(system, reg);
  rec.R_t = support_radius(system);
  rec.tail_masses.reserve(options.tail_h.size());
  for (const double h : options.tail_h) {
    rec.tail_masses.push_back(tail_mass(system, rec.B.c2, h));
  }
  double radius = options.concentration_radius;
  if (radius <= 0.0) {
    if (!(system.epsilon > 0.0) || !(system.epsilon < 1.0)) {
      throw std::domain_error("make_record: need epsilon in (0,1) for the default disk radius");
    }
    radius = system.epsilon * std::abs(std::log(system.epsilon));
  }
  rec.concentration = concentration_disk(system, radius);
  return rec;
}

void write_series_csv(const TimeSeries& series, const std::filesystem::path& path) {
  std::size_t tails = 0;
  for (const auto& rec : series.records) tails = std::max(tails, rec.tail_masses.size());

  std::ostringstream out;
  out << "t,B1,B2,I_axial,J_central,M0,M2,E,R_t,q1,q2,fraction";
  for (std::size_t i = 0; i < tails; ++i) out << ",tail_" << i;
  out << "\n";
  for (const auto& rec : series.records) {
    out << format_double(rec.t) << ',' << format_double(rec.B.c1) << ','
        << format_double(rec.B.c2) << ',' << format_double(rec.I_axial) << ','
        << format_double(rec.J_central) << ',' << format_double(rec.M0) << ','
        << format_double(rec.M2) << ',' << format_double(rec.energy) << ','
        << format_double(rec.R_t) << ',' << format_double(rec.concentration.q.z) << ','
        << format_double(rec.concentration.q.r) << ','
        << format_double(rec.concentration.fraction);
    for (std::size_t i = 0; i < tails; ++i) {
      out << ',' << (i < rec.tail_masses.size() ? format_double(rec.tail_masses[i]) : "0");
    }
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

}  // namespace vring
