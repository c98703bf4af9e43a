#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vring/asymptotics.hpp"
#include "vring/driver.hpp"
#include "vring/external_field.hpp"
#include "vring/vorticity.hpp"

namespace vring {

/// External-field selection: "none" or "constant-axial" (strength c, applied
/// as c / |log epsilon| along the axis).
struct FieldConfig {
  std::string type = "none";
  double c = 0.0;
};

struct NumericsConfig {
  double delta_ratio = 0.5;  ///< delta = delta_ratio * epsilon, in (0, 1]
  double dt_factor = 0.2;    ///< dt = dt_factor * delta / max |u(0)| unless dt set
  double dt = 0.0;           ///< explicit step (0 = use the factor policy)
  double T = 1.0;            ///< horizon
};

struct DiagnosticsConfig {
  int snapshot_every = 4;
  std::vector<double> tail_h_factors;  ///< radial band half-widths in units of epsilon
  double concentration_radius = 0.0;   ///< 0 = epsilon |log epsilon|
};

struct OutputConfig {
  std::string directory = "out";
  std::string series = "series.csv";
  std::string final_snapshot = "final.csv";
};

/// One simulation, fully specified.  Loaded from a JSON file with sections
/// rings / field / numerics / diagnostics / output; unknown keys are
/// rejected so typos cannot silently fall back to defaults.
struct RunConfig {
  int schema_version = 1;
  double epsilon = 0.05;
  std::vector<RingSpec> rings;
  FieldConfig field;
  NumericsConfig numerics;
  DiagnosticsConfig diagnostics;
  OutputConfig output;
  bool deterministic = true;
  int threads = 1;
  GuardPolicy guard;
  SeparationPolicy separation;
};

RunConfig run_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);
void write_run_config(const RunConfig& config, const std::filesystem::path& path);

/// Instantiates the configured external field for the run's epsilon.
ExternalField make_field(const FieldConfig& field, double epsilon);

/// Builds the RunSpec implied by a RunConfig (callbacks left empty).
RunSpec make_run_spec(const RunConfig& config);

/// A convergence study: the epsilon ladder plus the shared run template.
struct LadderConfig {
  int schema_version = 1;
  std::vector<double> epsilons;
  std::vector<RingSpec> rings;
  FieldConfig field;
  double T = 1.0;
  double delta_ratio = 0.5;
  double dt_factor = 0.2;
  int resolution = 16;
  int snapshot_every = 4;
  int threads = 1;
  double slack = 0.25;
  double k_radial = 0.2;
  double min_fraction = 0.8;
  double radial_drift_tol = 5e-3;
  GuardPolicy guard;
  OutputConfig output{.directory = "out", .series = "report.csv", .final_snapshot = ""};
};

LadderConfig ladder_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const LadderConfig& config);
LadderConfig load_ladder_config(const std::filesystem::path& path);

/// Translates the config into the study spec (progress callback left empty).
LadderSpec make_ladder_spec(const LadderConfig& config);

}  // namespace vring
