#include "vring/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "vring/elliptic.hpp"
#include "vring/kernel.hpp"

namespace vring {

namespace {

constexpr std::size_t kVelocityChunks = 64;

void require_regularization(const RegularizationSpec& reg) {
  if (!(reg.delta > 0.0) || !std::isfinite(reg.delta)) {
    throw std::invalid_argument("dynamics: regularization delta must be positive and finite");
  }
}

/// Fixed partition of the outer pair-loop index. Chunk c owns the contiguous
/// outer range [bounds[c], bounds[c+1]); boundaries depend only on n, and the
/// weights n - i balance the triangular pair counts across chunks.
std::vector<std::size_t> chunk_bounds(std::size_t n) {
  const std::size_t chunks = std::min<std::size_t>(kVelocityChunks, std::max<std::size_t>(n, 1));
  std::vector<std::size_t> bounds(chunks + 1, n);
  bounds[0] = 0;
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n + 1);
  std::size_t i = 0;
  double acc = 0.0;
  for (std::size_t c = 1; c < chunks; ++c) {
    const double target = total * static_cast<double>(c) / static_cast<double>(chunks);
    while (i < n && acc < target) {
      acc += static_cast<double>(n - i);
      ++i;
    }
    bounds[c] = i;
  }
  bounds[chunks] = n;
  return bounds;
}

/// Accumulates, for every outer index i in [begin, end), the self-term and the
/// symmetric pair interactions (i, j > i) into acc (2 doubles per particle).
void accumulate_chunk(const std::vector<double>& z, const std::vector<double>& r,
                      const std::vector<double>& g, double b_extra, std::size_t begin,
                      std::size_t end, double* acc) {
  const std::size_t n = z.size();
  for (std::size_t i = begin; i < end; ++i) {
    const double zi = z[i];
    const double ri = r[i];
    const double gi = g[i];
    const PairKernel self = ring_kernel_pair(0.0, 0.0, ri, ri, b_extra);
    acc[2 * i] += gi * self.h1_xy;
    acc[2 * i + 1] += gi * self.h2_xy;
    for (std::size_t j = i + 1; j < n; ++j) {
      const PairKernel pk = ring_kernel_pair(zi - z[j], ri - r[j], ri, r[j], b_extra);
      acc[2 * i] += g[j] * pk.h1_xy;
      acc[2 * i + 1] += g[j] * pk.h2_xy;
      acc[2 * j] += gi * pk.h1_yx;
      acc[2 * j + 1] += gi * pk.h2_yx;
    }
  }
}

std::vector<PlaneVector> velocity_pass(const std::vector<double>& z, const std::vector<double>& r,
                                       const std::vector<double>& g, double delta, int threads) {
  const std::size_t n = z.size();
  std::vector<PlaneVector> out(n, PlaneVector{0.0, 0.0});
  if (n == 0) return out;
  const double b_extra = delta * delta;
  const std::vector<std::size_t> bounds = chunk_bounds(n);
  const std::size_t chunks = bounds.size() - 1;

  // One private accumulator block per chunk; merging the blocks in fixed chunk
  // order makes the sum independent of how chunks are assigned to threads.
  std::vector<double> acc(chunks * 2 * n, 0.0);
  const int workers = std::min<int>(std::max(threads, 1), static_cast<int>(chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      accumulate_chunk(z, r, g, b_extra, bounds[c], bounds[c + 1], acc.data() + c * 2 * n);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t c = static_cast<std::size_t>(t); c < chunks;
             c += static_cast<std::size_t>(workers)) {
          accumulate_chunk(z, r, g, b_extra, bounds[c], bounds[c + 1], acc.data() + c * 2 * n);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t c = 0; c < chunks; ++c) {
    const double* block = acc.data() + c * 2 * n;
    for (std::size_t i = 0; i < n; ++i) {
      out[i].c1 += block[2 * i];
      out[i].c2 += block[2 * i + 1];
    }
  }
  return out;
}

struct Columns {
  std::vector<double> z, r, g;
};

Columns split_columns(const std::vector<Particle>& particles) {
  Columns c;
  c.z.reserve(particles.size());
  c.r.reserve(particles.size());
  c.g.reserve(particles.size());
  for (const auto& p : particles) {
    c.z.push_back(p.position.z);
    c.r.push_back(p.position.r);
    c.g.push_back(p.gamma);
  }
  return c;
}

void check_positions(const std::vector<Particle>& particles, double time, const char* stage) {
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const auto& p = particles[i].position;
    if (!(p.r > 0.0) || !std::isfinite(p.r) || !std::isfinite(p.z)) {
      throw NumericalAbort(i, time,
                           std::string("particle ") + std::to_string(i) + " left the half-plane (" +
                               stage + " stage, t = " + std::to_string(time) + ")");
    }
  }
}

}  // namespace

PlaneVector induced_velocity(const VortexSystem& system, const HalfPlanePoint& x,
                             const RegularizationSpec& reg) {
  require_regularization(reg);
  if (!(x.r > 0.0)) {
    throw std::domain_error("induced_velocity: evaluation point must have r > 0");
  }
  const double b_extra = reg.delta * reg.delta;
  PlaneVector u{0.0, 0.0};
  for (const auto& p : system.particles) {
    const PairKernel pk =
        ring_kernel_pair(x.z - p.position.z, x.r - p.position.r, x.r, p.position.r, b_extra);
    u.c1 += p.gamma * pk.h1_xy;
    u.c2 += p.gamma * pk.h2_xy;
  }
  return u;
}

std::vector<PlaneVector> self_velocities(const VortexSystem& system, const RegularizationSpec& reg,
                                         int threads) {
  require_regularization(reg);
  const Columns c = split_columns(system.particles);
  return velocity_pass(c.z, c.r, c.g, reg.delta, threads);
}

std::vector<PlaneVector> system_rhs(const VortexSystem& system, const ExternalField& field,
                                    double t, const RegularizationSpec& reg, int threads) {
  std::vector<PlaneVector> u = self_velocities(system, reg, threads);
  if (field.evaluate) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] += field.evaluate(system.particles[i].position, t);
    }
  }
  return u;
}

void rk4_step(VortexSystem& system, const ExternalField& field, const RegularizationSpec& reg,
              const IntegratorSpec& integrator, int threads) {
  const double dt = integrator.dt;
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("rk4_step: dt must be positive and finite");
  }
  const double t0 = system.time;
  const std::size_t n = system.particles.size();

  VortexSystem stage = system;
  auto place = [&](const std::vector<PlaneVector>& slope, double scale, const char* label) {
    for (std::size_t i = 0; i < n; ++i) {
      stage.particles[i].position.z = system.particles[i].position.z + scale * slope[i].c1;
      stage.particles[i].position.r = system.particles[i].position.r + scale * slope[i].c2;
    }
    check_positions(stage.particles, t0, label);
  };

  const std::vector<PlaneVector> k1 = system_rhs(system, field, t0, reg, threads);
  place(k1, 0.5 * dt, "k2");
  const std::vector<PlaneVector> k2 = system_rhs(stage, field, t0 + 0.5 * dt, reg, threads);
  place(k2, 0.5 * dt, "k3");
  const std::vector<PlaneVector> k3 = system_rhs(stage, field, t0 + 0.5 * dt, reg, threads);
  place(k3, dt, "k4");
  const std::vector<PlaneVector> k4 = system_rhs(stage, field, t0 + dt, reg, threads);

  for (std::size_t i = 0; i < n; ++i) {
    const double uz = k1[i].c1 + 2.0 * k2[i].c1 + 2.0 * k3[i].c1 + k4[i].c1;
    const double ur = k1[i].c2 + 2.0 * k2[i].c2 + 2.0 * k3[i].c2 + k4[i].c2;
    system.particles[i].position.z += dt / 6.0 * uz;
    system.particles[i].position.r += dt / 6.0 * ur;
  }
  system.time = t0 + dt;
  check_positions(system.particles, system.time, "update");
}

VortexSystem step(const VortexSystem& system, const ExternalField& field,
                  const IntegratorSpec& integrator, const RegularizationSpec& reg, int threads) {
  VortexSystem next = system;
  rk4_step(next, field, reg, integrator, threads);
  return next;
}

PlaneVector mollified_interaction(const HalfPlanePoint& x, const HalfPlanePoint& y,
                                  const MollifiedKernelSpec& spec) {
  if (!(spec.cutoff > 0.0) || !(spec.blend_width > 0.0) || !(spec.blend_width <= spec.cutoff)) {
    throw std::invalid_argument(
        "mollified_interaction: need 0 < blend_width <= cutoff and cutoff > 0");
  }
  if (!(x.r > 0.0)) {
    throw std::domain_error("mollified_interaction: target must have r > 0");
  }
  const PlaneVector w = separation(x, y);
  const double rho = norm(w);
  if (rho >= spec.cutoff) {
    return kernel::axisym_kernel_elliptic(x, y);
  }
  const double inner = spec.cutoff - spec.blend_width;
  if (rho <= inner) {
    return PlaneVector{0.0, 0.0};
  }

  // Blend the stream function: with psi~ = beta(rho) psi, the induced kernel
  // picks up a beta'(rho) grad(rho) x psi correction and stays divergence-free.
  const double u = (rho - inner) / spec.blend_width;
  const double beta = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  const double beta_prime = 30.0 * u * u * (1.0 - u) * (1.0 - u) / spec.blend_width;

  const PlaneVector h = kernel::axisym_kernel_elliptic(x, y);
  const double s = ring_stream(norm_sq(w), x.r, y.r, 0.0);
  const double s_over = s / x.r;
  return PlaneVector{beta * h.c1 + beta_prime * (w.c2 / rho) * s_over,
                     beta * h.c2 - beta_prime * (w.c1 / rho) * s_over};
}

}  // namespace vring
