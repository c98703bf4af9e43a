#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "vring/vorticity.hpp"

using namespace vring;

namespace {

RingSpec unit_ring(double r0 = 1.0, double a = 1.0, int res = 20,
                   RingProfile profile = RingProfile::uniform_disk) {
  RingSpec ring;
  ring.center = {0.0, r0};
  ring.intensity = a;
  ring.resolution = res;
  ring.profile = profile;
  return ring;
}

}  // namespace

TEST_CASE("initial data: uniform disk layout, counts, exact weight sums") {
  const double eps = 0.05;
  const VortexSystem sys = build_initial_data({unit_ring(1.0, 1.0, 50)}, eps);

  // independent cell recount
  const double h = 2.0 * eps / 50;
  int expected = 0;
  for (int i = -26; i < 26; ++i)
    for (int j = -26; j < 26; ++j)
      if ((i + 0.5) * (i + 0.5) * h * h + (j + 0.5) * (j + 0.5) * h * h < eps * eps) ++expected;
  CHECK(static_cast<int>(sys.particles.size()) == expected);
  CHECK(sys.particles.size() > 1850);
  CHECK(sys.particles.size() < 2050);

  const double target = 1.0 / std::abs(std::log(eps));
  CHECK(sys.ring_weight(0) == target);  // bit-exact by construction
  CHECK(sys.total_weight() == target);

  // support inside the core and mirror symmetry of the weighted layout
  double z_moment = 0.0, r_moment = 0.0, abs_gamma = 0.0;
  for (const Particle& p : sys.particles) {
    CHECK(distance(p.position, {0.0, 1.0}) < eps);
    CHECK(p.gamma > 0.0);
    z_moment += p.gamma * p.position.z;
    r_moment += p.gamma * (p.position.r - 1.0);
    abs_gamma += std::abs(p.gamma);
  }
  CHECK(std::abs(z_moment) <= 1e-12 * abs_gamma * eps);
  CHECK(std::abs(r_moment) <= 1e-12 * abs_gamma * eps);

  // initial radial spread is bounded by the core radius
  double m2 = 0.0;
  for (const Particle& p : sys.particles) m2 += p.gamma * (p.position.r - 1.0) * (p.position.r - 1.0);
  CHECK(m2 <= eps * eps * target);

  // determinism: rebuilding gives identical particles
  const VortexSystem again = build_initial_data({unit_ring(1.0, 1.0, 50)}, eps);
  REQUIRE(again.particles.size() == sys.particles.size());
  for (std::size_t i = 0; i < sys.particles.size(); ++i) {
    CHECK(again.particles[i].position.z == sys.particles[i].position.z);
    CHECK(again.particles[i].position.r == sys.particles[i].position.r);
    CHECK(again.particles[i].gamma == sys.particles[i].gamma);
  }
}

TEST_CASE("initial data: reconstructed density matches the flat profile") {
  const double eps = 0.05;
  const VortexSystem sys = build_initial_data({unit_ring(1.0, 1.0, 50)}, eps);
  const double omega0 = 1.0 / (pi * eps * eps * std::abs(std::log(eps)));
  const double at_center = reconstruct_density(sys, {0.0, 1.0}, 0.5 * eps);
  CHECK(at_center > 0.8 * omega0);
  CHECK(at_center < 1.1 * omega0);
  // well outside the support the density vanishes identically
  CHECK(reconstruct_density(sys, {0.0, 1.0 + 3.0 * eps}, 0.5 * eps) == 0.0);
  CHECK_THROWS_AS(reconstruct_density(sys, {0.0, 1.0}, 0.0), std::domain_error);
}

TEST_CASE("initial data: truncated-gaussian profile") {
  const double eps = 0.05;
  const VortexSystem sys =
      build_initial_data({unit_ring(1.0, 1.0, 20, RingProfile::truncated_gaussian)}, eps);
  CHECK(sys.particles.size() == 316);  // shell layout for resolution 20
  const double target = 1.0 / std::abs(std::log(eps));
  CHECK(sys.ring_weight(0) == target);
  for (const Particle& p : sys.particles) CHECK(distance(p.position, {0.0, 1.0}) < eps);

  // peak density close to the analytic gaussian peak, and below the flat cap
  const double sigma = 0.5 * eps;
  const double peak = target / (2.0 * pi * sigma * sigma * (1.0 - std::exp(-2.0)));
  const double at_center = reconstruct_density(sys, {0.0, 1.0}, 0.4 * eps);
  CHECK(at_center > 0.7 * peak);
  CHECK(at_center < 1.3 * peak);
  CHECK(at_center < 1.0 / (eps * eps * std::abs(std::log(eps))));

  // mirror symmetry of the shell layout
  double z_moment = 0.0;
  for (const Particle& p : sys.particles) z_moment += p.gamma * p.position.z;
  CHECK(std::abs(z_moment) <= 1e-12 * target * eps);
}

TEST_CASE("initial data: validation errors") {
  CHECK_THROWS_AS(build_initial_data({unit_ring()}, 0.0), ConfigurationError);
  CHECK_THROWS_AS(build_initial_data({unit_ring()}, 1.0), ConfigurationError);
  CHECK_THROWS_AS(build_initial_data({unit_ring(0.04)}, 0.05), ConfigurationError);
  CHECK_THROWS_AS(build_initial_data({unit_ring(1.0, 1.0, 3)}, 0.05), ConfigurationError);
  CHECK_THROWS_AS(build_initial_data({unit_ring(1.0, 0.0)}, 0.05), ConfigurationError);
  CHECK_THROWS_AS(build_initial_data({}, 0.05), ConfigurationError);
  // overlapping cores
  RingSpec a = unit_ring(1.0), b = unit_ring(1.05);
  CHECK_THROWS_AS(build_initial_data({a, b}, 0.05), ConfigurationError);
  // mismatched per-ring radius
  RingSpec c = unit_ring();
  c.epsilon = 0.07;
  CHECK_THROWS_AS(build_initial_data({c}, 0.05), ConfigurationError);

  // separation policy: warn collects findings, error throws
  RingSpec lo = unit_ring(1.0), hi = unit_ring(1.5);
  SeparationPolicy policy{SeparationPolicy::Mode::warn, 0.4};
  std::vector<std::string> warnings;
  build_initial_data({lo, hi}, 0.05, policy, &warnings);
  CHECK(warnings.size() == 1);  // radial gap 0.5 < 2D = 0.8
  policy.mode = SeparationPolicy::Mode::error;
  CHECK_THROWS_AS(build_initial_data({lo, hi}, 0.05, policy), ConfigurationError);
  policy.D = 0.2;
  policy.mode = SeparationPolicy::Mode::warn;
  warnings.clear();
  build_initial_data({lo, hi}, 0.05, policy, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("observables: weighted sums and tail masses") {
  const double eps = 0.05;
  const VortexSystem sys = build_initial_data({unit_ring(1.0, 2.0, 16)}, eps);
  double manual = 0.0;
  for (const Particle& p : sys.particles) manual += p.gamma * p.position.r * p.position.r;
  CHECK(integrate_observable(sys, [](HalfPlanePoint x) { return x.r * x.r; }) ==
        doctest::Approx(manual).epsilon(1e-15));

  // everything sits within eps of the center radius
  CHECK(tail_mass(sys, 1.0, eps) == 0.0);
  CHECK(tail_mass(sys, 1.0, 0.0) == doctest::Approx(sys.total_weight()).epsilon(1e-12));
  // independent recount at half the core radius
  double expected = 0.0;
  for (const Particle& p : sys.particles)
    if (std::abs(p.position.r - 1.0) > 0.5 * eps) expected += p.gamma;
  CHECK(tail_mass(sys, 1.0, 0.5 * eps) == expected);
  CHECK(expected > 0.0);
  CHECK(expected < sys.total_weight());
}

TEST_CASE("mollifier: quintic plateau, blend values, slope bound, sandwich") {
  const MollifierSpec spec{2.0, 0.5};
  CHECK(mollifier_W(spec, 0.0) == 1.0);
  CHECK(mollifier_W(spec, 2.0) == 1.0);
  CHECK(mollifier_W(spec, -1.3) == 1.0);
  CHECK(mollifier_W(spec, 2.5) == 0.0);
  CHECK(mollifier_W(spec, 5.0) == 0.0);
  CHECK(mollifier_W(spec, 2.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mollifier_W(spec, -2.25) == mollifier_W(spec, 2.25));

  // monotone decay and the advertised slope bound sup|W'| = 1.875 / h
  double prev = 1.0;
  double max_slope = 0.0;
  const double ds = 1e-4;
  for (double s = 1.9; s <= 2.6; s += ds) {
    const double w = mollifier_W(spec, s);
    CHECK(w <= prev + 1e-15);
    max_slope = std::max(max_slope, (prev - w) / ds);
    prev = w;
  }
  CHECK(max_slope <= mollifier_slope_bound / spec.h * (1.0 + 1e-6));
  CHECK(max_slope >= mollifier_slope_bound / spec.h * (1.0 - 1e-3));
  CHECK_THROWS_AS(mollifier_W({1.0, 0.0}, 0.5), std::domain_error);

  // smooth tail is sandwiched between the sharp tails at R and R + h
  const double eps = 0.05;
  const VortexSystem sys = build_initial_data({unit_ring(1.0, 1.0, 24)}, eps);
  for (double R : {0.2 * eps, 0.5 * eps, 0.8 * eps}) {
    const MollifierSpec m{R, 0.4 * eps};
    const double smooth = mollified_tail(sys, 1.0, m);
    CHECK(smooth <= tail_mass(sys, 1.0, R) + 1e-18);
    CHECK(smooth >= tail_mass(sys, 1.0, R + m.h) - 1e-18);
  }
}

TEST_CASE("density kernel: unit mass of the bump") {
  VortexSystem one;
  one.epsilon = 0.5;
  one.rings = {unit_ring()};
  one.particles = {{{0.0, 5.0}, 1.0, 0}};
  // midpoint-rule integral of the reconstructed density over the support
  const double bw = 1.0;
  const int n = 400;
  const double cell = 2.2 / n;
  double mass = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const HalfPlanePoint x{-1.1 + (i + 0.5) * cell, 5.0 - 1.1 + (j + 0.5) * cell};
      mass += reconstruct_density(one, x, bw) * cell * cell;
    }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("snapshot csv: bit-exact round trip and error handling") {
  const double eps = 0.07;
  const VortexSystem sys = build_initial_data(
      {unit_ring(1.0, 1.0, 12), unit_ring(2.0, -0.5, 12, RingProfile::truncated_gaussian)}, eps);
  const auto path = std::filesystem::temp_directory_path() / "vring_snapshot_test.csv";
  write_snapshot_csv(sys, path);
  const std::vector<Particle> back = read_snapshot_csv(path);
  REQUIRE(back.size() == sys.particles.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].ring_id == sys.particles[i].ring_id);
    CHECK(back[i].position.z == sys.particles[i].position.z);
    CHECK(back[i].position.r == sys.particles[i].position.r);
    CHECK(back[i].gamma == sys.particles[i].gamma);
  }
  std::filesystem::remove(path);

  CHECK_THROWS_AS(read_snapshot_csv(path), ConfigurationError);
  const auto bad = std::filesystem::temp_directory_path() / "vring_snapshot_bad.csv";
  {
    std::ofstream out(bad);
    out << "ring_id,z,r,gamma\n0,1.0,not_a_number,2.0\n";
  }
  CHECK_THROWS_AS(read_snapshot_csv(bad), ConfigurationError);
  std::filesystem::remove(bad);
}
