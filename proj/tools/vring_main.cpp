// Command-line front end: simulate | kernel-selftest | convergence.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 numerical abort or
// incomplete study, 3 failed verification (self-test rows or study verdicts).

#include <CLI11.hpp>

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "vring/asymptotics.hpp"
#include "vring/config.hpp"
#include "vring/driver.hpp"
#include "vring/io_util.hpp"
#include "vring/selftest.hpp"

namespace {

namespace fs = std::filesystem;
using namespace vring;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAborted = 2;
constexpr int kExitFailedChecks = 3;

/// Output directory precedence: --out flag, then VRING_OUT, then the config.
fs::path resolve_out(const std::string& cli_out, const std::string& config_dir) {
  if (!cli_out.empty()) return cli_out;
  if (const char* env = std::getenv("VRING_OUT"); env != nullptr && *env != '\0') return env;
  return config_dir;
}

int resolve_threads(int from_cli, int from_config) {
  int threads = from_cli >= 0 ? from_cli : from_config;
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return threads;
}

int run_simulate(const std::string& config_path, const std::string& out_override,
                 int threads_override, bool deterministic) {
  RunConfig config = load_run_config(config_path);
  if (deterministic) config.deterministic = true;

  std::vector<std::string> warnings;
  VortexSystem system = build_initial_data(config.rings, config.epsilon, config.separation,
                                           &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

  RunSpec spec = make_run_spec(config);
  spec.threads = resolve_threads(threads_override, config.threads);
  spec.on_warning = [](const std::string& w) { std::cerr << "warning: " << w << '\n'; };
  const ExternalField field = make_field(config.field, config.epsilon);

  const fs::path out_dir = resolve_out(out_override, config.output.directory);
  const TimeSeries series = run(system, field, config.numerics.T, spec);

  write_series_csv(series, out_dir / config.output.series);
  if (!config.output.final_snapshot.empty()) {
    write_snapshot_csv(system, out_dir / config.output.final_snapshot);
  }

  const DiagnosticsRecord& last = series.records.back();
  const long steps =
      series.dt > 0.0 ? std::lround(config.numerics.T / series.dt) : 0;
  std::cout << "simulate: " << system.particles.size() << " particles, " << steps
            << " steps, dt = " << format_double(series.dt) << ", t = "
            << format_double(last.t) << ", B = (" << format_double(last.B.c1) << ", "
            << format_double(last.B.c2) << ")";
  if (!config.rings.empty()) {
    const PredictedTrajectory traj{config.rings.front().center,
                                   config.rings.front().intensity};
    std::cout << ", max |B - zeta| = " << format_double(trajectory_error(series, traj));
  }
  std::cout << '\n';
  std::cout << "wrote " << (out_dir / config.output.series).string();
  if (!config.output.final_snapshot.empty()) {
    std::cout << " and " << (out_dir / config.output.final_snapshot).string();
  }
  std::cout << '\n';
  return kExitOk;
}

int run_selftest(const std::string& out_override, bool inject_fault) {
  const SelfTestReport report = run_kernel_selftest(inject_fault);
  for (const SelfTestRow& row : report.rows) {
    std::cout << (row.ok ? "[PASS] " : "[FAIL] ") << row.check
              << "  max_error = " << format_double(row.max_error)
              << "  threshold = " << format_double(row.threshold) << '\n';
  }
  const fs::path out_dir = resolve_out(out_override, "out");
  const fs::path csv = out_dir / "selftest.csv";
  write_selftest_csv(report, csv);
  std::cout << "wrote " << csv.string() << '\n';
  if (!report.pass()) {
    std::cerr << "kernel self-test FAILED\n";
    return kExitFailedChecks;
  }
  std::cout << "kernel self-test passed\n";
  return kExitOk;
}

int run_convergence(const std::string& config_path, const std::string& out_override,
                    int threads_override) {
  const LadderConfig config = load_ladder_config(config_path);
  LadderSpec spec = make_ladder_spec(config);
  spec.threads = resolve_threads(threads_override, config.threads);
  spec.on_progress = [](const std::string& line) { std::cerr << line << '\n'; };

  const ConvergenceReport report = run_epsilon_study(spec);

  const fs::path out_dir = resolve_out(out_override, config.output.directory);
  const fs::path csv = out_dir / config.output.series;
  fs::path json = csv;
  json.replace_extension(".json");
  write_report_csv(report, csv);
  write_report_json(report, json);
  std::cout << "wrote " << csv.string() << " and " << json.string() << '\n';

  for (const LadderRow& row : report.rows) {
    std::cout << "epsilon = " << format_double(row.epsilon) << ": ratio = "
              << format_double(row.speed_ratio) << ", excess = " << format_double(row.excess)
              << ", fraction = " << format_double(row.fraction)
              << (row.aborted ? " (aborted: " + row.abort_message + ")" : "") << '\n';
  }
  if (!report.complete) {
    std::cerr << "convergence study incomplete (a rung aborted)\n";
    return kExitAborted;
  }
  if (!report.pass()) {
    std::cerr << "convergence study FAILED its verdicts\n";
    return kExitFailedChecks;
  }
  std::cout << "convergence study passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axisymmetric vortex ring particle simulator"};
  app.require_subcommand(1);

  std::string sim_config, sim_out;
  int sim_threads = -1;
  bool sim_deterministic = false;
  CLI::App* sim = app.add_subcommand("simulate", "integrate one configuration and write series");
  sim->add_option("--config", sim_config, "run configuration (JSON)")->required();
  sim->add_option("--out", sim_out, "output directory (overrides VRING_OUT and the config)");
  sim->add_option("--threads", sim_threads, "worker threads (0 = auto)");
  sim->add_flag("--deterministic", sim_deterministic,
                "force deterministic reductions (they are always deterministic; "
                "the flag is accepted for interface stability)");

  std::string st_out;
  bool st_fault = false;
  CLI::App* st = app.add_subcommand("kernel-selftest", "run the built-in kernel battery");
  st->add_option("--out", st_out, "output directory for selftest.csv");
  st->add_flag("--inject-fault", st_fault,
               "perturb the kernel route under test; the battery must then fail");

  std::string cv_config, cv_out;
  int cv_threads = -1;
  CLI::App* cv = app.add_subcommand("convergence", "run a shrinking-core ladder study");
  cv->add_option("--config", cv_config, "ladder configuration (JSON)")->required();
  cv->add_option("--out", cv_out, "output directory (overrides VRING_OUT and the config)");
  cv->add_option("--threads", cv_threads, "worker threads (0 = auto)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(sim_config, sim_out, sim_threads, sim_deterministic);
    if (st->parsed()) return run_selftest(st_out, st_fault);
    if (cv->parsed()) return run_convergence(cv_config, cv_out, cv_threads);
  } catch (const ConfigurationError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const NumericalAbort& err) {
    std::cerr << "numerical abort: " << err.what() << '\n';
    return kExitAborted;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
