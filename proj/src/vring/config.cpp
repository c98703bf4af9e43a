#include "vring/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vring/io_util.hpp"

namespace vring {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigurationError(message); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + ": expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      fail(where + ": unknown key '" + item.key() + "'");
    }
  }
}

double get_number(const json& obj, const std::string& key, double fallback,
                  const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) fail(where + "." + key + ": expected a number");
  return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) fail(where + "." + key + ": expected an integer");
  return obj.at(key).get<int>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) fail(where + "." + key + ": expected a boolean");
  return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback,
                       const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) fail(where + "." + key + ": expected a string");
  return obj.at(key).get<std::string>();
}

RingProfile parse_profile(const std::string& name, const std::string& where) {
  if (name == "uniform-disk") return RingProfile::uniform_disk;
  if (name == "truncated-gaussian") return RingProfile::truncated_gaussian;
  fail(where + ": unknown profile '" + name + "' (use uniform-disk or truncated-gaussian)");
}

std::string profile_name(RingProfile profile) {
  return profile == RingProfile::uniform_disk ? "uniform-disk" : "truncated-gaussian";
}

GuardPolicy::Mode parse_guard_mode(const std::string& name, const std::string& where) {
  if (name == "off") return GuardPolicy::Mode::off;
  if (name == "warn") return GuardPolicy::Mode::warn;
  if (name == "abort") return GuardPolicy::Mode::abort;
  fail(where + ": unknown guard mode '" + name + "' (use off, warn or abort)");
}

std::string guard_mode_name(GuardPolicy::Mode mode) {
  switch (mode) {
    case GuardPolicy::Mode::off: return "off";
    case GuardPolicy::Mode::warn: return "warn";
    case GuardPolicy::Mode::abort: return "abort";
  }
  return "warn";
}

SeparationPolicy::Mode parse_separation_mode(const std::string& name, const std::string& where) {
  if (name == "off") return SeparationPolicy::Mode::off;
  if (name == "warn") return SeparationPolicy::Mode::warn;
  if (name == "error") return SeparationPolicy::Mode::error;
  fail(where + ": unknown separation mode '" + name + "' (use off, warn or error)");
}

std::string separation_mode_name(SeparationPolicy::Mode mode) {
  switch (mode) {
    case SeparationPolicy::Mode::off: return "off";
    case SeparationPolicy::Mode::warn: return "warn";
    case SeparationPolicy::Mode::error: return "error";
  }
  return "off";
}

RingSpec ring_from_json(const json& obj, std::size_t index) {
  const std::string where = "rings[" + std::to_string(index) + "]";
  check_keys(obj, {"center", "intensity", "profile", "resolution", "epsilon"}, where);
  if (!obj.contains("center")) fail(where + ": missing center");
  const json& center = obj.at("center");
  check_keys(center, {"z", "r"}, where + ".center");
  if (!center.contains("r")) fail(where + ".center: missing r");

  RingSpec ring;
  ring.center.z = get_number(center, "z", 0.0, where + ".center");
  ring.center.r = get_number(center, "r", 0.0, where + ".center");
  ring.intensity = get_number(obj, "intensity", 1.0, where);
  ring.profile = parse_profile(get_string(obj, "profile", "uniform-disk", where), where);
  ring.resolution = get_int(obj, "resolution", 20, where);
  ring.epsilon = get_number(obj, "epsilon", 0.0, where);
  return ring;
}

json ring_to_json(const RingSpec& ring) {
  return json{{"center", {{"z", ring.center.z}, {"r", ring.center.r}}},
              {"intensity", ring.intensity},
              {"profile", profile_name(ring.profile)},
              {"resolution", ring.resolution},
              {"epsilon", ring.epsilon}};
}

FieldConfig field_from_json(const json& obj) {
  check_keys(obj, {"type", "c"}, "field");
  FieldConfig field;
  field.type = get_string(obj, "type", "none", "field");
  field.c = get_number(obj, "c", 0.0, "field");
  if (field.type != "none" && field.type != "constant-axial") {
    fail("field.type: unknown type '" + field.type + "' (use none or constant-axial)");
  }
  return field;
}

GuardPolicy guard_from_json(const json& obj) {
  check_keys(obj, {"mode", "lower", "upper"}, "guard");
  GuardPolicy guard;
  guard.mode = parse_guard_mode(get_string(obj, "mode", "warn", "guard"), "guard");
  guard.lower = get_number(obj, "lower", 0.5, "guard");
  guard.upper = get_number(obj, "upper", 1.5, "guard");
  if (!(guard.lower > 0.0) || !(guard.upper > guard.lower)) {
    fail("guard: need 0 < lower < upper");
  }
  return guard;
}

json guard_to_json(const GuardPolicy& guard) {
  return json{{"mode", guard_mode_name(guard.mode)}, {"lower", guard.lower},
              {"upper", guard.upper}};
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in.good()) fail("cannot open config file: " + path.string());
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::parse_error& err) {
    fail("config parse error in " + path.string() + ": " + err.what());
  }
}

void require_schema(const json& doc, const std::string& where) {
  const int version = get_int(doc, "schema_version", 0, where);
  if (version != 1) fail(where + ": schema_version must be 1");
}

}  // namespace

RunConfig run_config_from_json(const json& doc) {
  check_keys(doc,
             {"schema_version", "epsilon", "rings", "field", "numerics", "diagnostics", "output",
              "deterministic", "threads", "guard", "separation"},
             "config");
  require_schema(doc, "config");

  RunConfig config;
  config.epsilon = get_number(doc, "epsilon", 0.0, "config");
  if (!(config.epsilon > 0.0) || !(config.epsilon < 1.0)) {
    fail("config.epsilon: must lie in (0, 1)");
  }

  if (!doc.contains("rings") || !doc.at("rings").is_array() || doc.at("rings").empty()) {
    fail("config.rings: need a non-empty array of rings");
  }
  for (std::size_t i = 0; i < doc.at("rings").size(); ++i) {
    config.rings.push_back(ring_from_json(doc.at("rings").at(i), i));
  }

  if (doc.contains("field")) config.field = field_from_json(doc.at("field"));

  if (doc.contains("numerics")) {
    const json& num = doc.at("numerics");
    check_keys(num, {"delta_ratio", "dt_factor", "dt", "T"}, "numerics");
    config.numerics.delta_ratio = get_number(num, "delta_ratio", 0.5, "numerics");
    config.numerics.dt_factor = get_number(num, "dt_factor", 0.2, "numerics");
    config.numerics.dt = get_number(num, "dt", 0.0, "numerics");
    config.numerics.T = get_number(num, "T", 1.0, "numerics");
  }
  if (!(config.numerics.delta_ratio > 0.0) || config.numerics.delta_ratio > 1.0) {
    fail("numerics.delta_ratio: must lie in (0, 1] so delta <= epsilon");
  }
  if (config.numerics.dt < 0.0 ||
      (config.numerics.dt == 0.0 && !(config.numerics.dt_factor > 0.0))) {
    fail("numerics: need dt > 0 or dt_factor > 0");
  }
  if (config.numerics.T < 0.0) fail("numerics.T: must be non-negative");

  if (doc.contains("diagnostics")) {
    const json& diag = doc.at("diagnostics");
    check_keys(diag, {"snapshot_every", "tail_h_factors", "concentration_radius"}, "diagnostics");
    config.diagnostics.snapshot_every = get_int(diag, "snapshot_every", 4, "diagnostics");
    if (diag.contains("tail_h_factors")) {
      if (!diag.at("tail_h_factors").is_array()) {
        fail("diagnostics.tail_h_factors: expected an array of numbers");
      }
      for (const auto& v : diag.at("tail_h_factors")) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
          fail("diagnostics.tail_h_factors: entries must be positive numbers");
        }
        config.diagnostics.tail_h_factors.push_back(v.get<double>());
      }
    }
    config.diagnostics.concentration_radius =
        get_number(diag, "concentration_radius", 0.0, "diagnostics");
  }
  if (config.diagnostics.snapshot_every < 1) {
    fail("diagnostics.snapshot_every: must be at least 1");
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    check_keys(out, {"directory", "series", "final_snapshot"}, "output");
    config.output.directory = get_string(out, "directory", "out", "output");
    config.output.series = get_string(out, "series", "series.csv", "output");
    config.output.final_snapshot = get_string(out, "final_snapshot", "final.csv", "output");
  }

  config.deterministic = get_bool(doc, "deterministic", true, "config");
  config.threads = get_int(doc, "threads", 1, "config");
  if (config.threads < 0) fail("config.threads: must be >= 0 (0 = auto)");

  if (doc.contains("guard")) config.guard = guard_from_json(doc.at("guard"));

  if (doc.contains("separation")) {
    const json& sep = doc.at("separation");
    check_keys(sep, {"mode", "D"}, "separation");
    config.separation.mode =
        parse_separation_mode(get_string(sep, "mode", "off", "separation"), "separation");
    config.separation.D = get_number(sep, "D", 0.0, "separation");
    if (config.separation.mode != SeparationPolicy::Mode::off && !(config.separation.D > 0.0)) {
      fail("separation.D: must be positive when the policy is active");
    }
  }
  return config;
}

json to_json(const RunConfig& config) {
  json rings = json::array();
  for (const auto& ring : config.rings) rings.push_back(ring_to_json(ring));
  json tails = json::array();
  for (const double f : config.diagnostics.tail_h_factors) tails.push_back(f);
  return json{
      {"schema_version", config.schema_version},
      {"epsilon", config.epsilon},
      {"rings", rings},
      {"field", {{"type", config.field.type}, {"c", config.field.c}}},
      {"numerics",
       {{"delta_ratio", config.numerics.delta_ratio},
        {"dt_factor", config.numerics.dt_factor},
        {"dt", config.numerics.dt},
        {"T", config.numerics.T}}},
      {"diagnostics",
       {{"snapshot_every", config.diagnostics.snapshot_every},
        {"tail_h_factors", tails},
        {"concentration_radius", config.diagnostics.concentration_radius}}},
      {"output",
       {{"directory", config.output.directory},
        {"series", config.output.series},
        {"final_snapshot", config.output.final_snapshot}}},
      {"deterministic", config.deterministic},
      {"threads", config.threads},
      {"guard", guard_to_json(config.guard)},
      {"separation",
       {{"mode", separation_mode_name(config.separation.mode)}, {"D", config.separation.D}}}};
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(parse_file(path));
}

void write_run_config(const RunConfig& config, const std::filesystem::path& path) {
  atomic_write_text(path, to_json(config).dump(2) + "\n");
}

ExternalField make_field(const FieldConfig& field, double epsilon) {
  if (field.type == "constant-axial") return constant_axial_field(field.c, epsilon);
  return zero_field(epsilon);
}

RunSpec make_run_spec(const RunConfig& config) {
  RunSpec spec;
  spec.reg.delta = config.numerics.delta_ratio * config.epsilon;
  spec.integrator.dt = config.numerics.dt;
  spec.dt_factor = config.numerics.dt_factor;
  spec.snapshot_every = config.diagnostics.snapshot_every;
  spec.threads = config.threads;
  spec.guard = config.guard;
  for (const double f : config.diagnostics.tail_h_factors) {
    spec.diagnostics.tail_h.push_back(f * config.epsilon);
  }
  spec.diagnostics.concentration_radius = config.diagnostics.concentration_radius;
  return spec;
}

LadderConfig ladder_config_from_json(const json& doc) {
  check_keys(doc,
             {"schema_version", "epsilons", "rings", "field", "T", "delta_ratio", "dt_factor",
              "resolution", "snapshot_every", "threads", "slack", "k_radial", "min_fraction",
              "radial_drift_tol", "guard", "output"},
             "ladder");
  require_schema(doc, "ladder");

  LadderConfig config;
  if (!doc.contains("epsilons") || !doc.at("epsilons").is_array() || doc.at("epsilons").empty()) {
    fail("ladder.epsilons: need a non-empty array");
  }
  for (const auto& v : doc.at("epsilons")) {
    if (!v.is_number()) fail("ladder.epsilons: entries must be numbers");
    config.epsilons.push_back(v.get<double>());
  }
  for (std::size_t i = 0; i < config.epsilons.size(); ++i) {
    const double e = config.epsilons[i];
    if (!(e > 0.0) || !(e < 1.0)) fail("ladder.epsilons: values must lie in (0, 1)");
    if (i > 0 && !(e < config.epsilons[i - 1])) {
      fail("ladder.epsilons: must be strictly decreasing");
    }
  }

  if (!doc.contains("rings") || !doc.at("rings").is_array() || doc.at("rings").empty()) {
    fail("ladder.rings: need a non-empty array of rings");
  }
  for (std::size_t i = 0; i < doc.at("rings").size(); ++i) {
    config.rings.push_back(ring_from_json(doc.at("rings").at(i), i));
  }

  if (doc.contains("field")) config.field = field_from_json(doc.at("field"));
  config.T = get_number(doc, "T", 1.0, "ladder");
  config.delta_ratio = get_number(doc, "delta_ratio", 0.5, "ladder");
  config.dt_factor = get_number(doc, "dt_factor", 0.2, "ladder");
  config.resolution = get_int(doc, "resolution", 16, "ladder");
  config.snapshot_every = get_int(doc, "snapshot_every", 4, "ladder");
  config.threads = get_int(doc, "threads", 1, "ladder");
  config.slack = get_number(doc, "slack", 0.25, "ladder");
  config.k_radial = get_number(doc, "k_radial", 0.2, "ladder");
  config.min_fraction = get_number(doc, "min_fraction", 0.8, "ladder");
  config.radial_drift_tol = get_number(doc, "radial_drift_tol", 5e-3, "ladder");
  if (doc.contains("guard")) config.guard = guard_from_json(doc.at("guard"));
  if (doc.contains("output")) {
    const json& out = doc.at("output");
    check_keys(out, {"directory", "series", "final_snapshot"}, "output");
    config.output.directory = get_string(out, "directory", "out", "output");
    config.output.series = get_string(out, "series", "report.csv", "output");
    config.output.final_snapshot = get_string(out, "final_snapshot", "", "output");
  }

  if (!(config.T > 0.0)) fail("ladder.T: must be positive");
  if (!(config.delta_ratio > 0.0) || config.delta_ratio > 1.0) {
    fail("ladder.delta_ratio: must lie in (0, 1]");
  }
  if (!(config.dt_factor > 0.0)) fail("ladder.dt_factor: must be positive");
  if (config.resolution < 4) fail("ladder.resolution: must be at least 4");
  if (config.snapshot_every < 1) fail("ladder.snapshot_every: must be at least 1");
  if (!(config.k_radial > 0.0) || !(config.k_radial < 0.25)) {
    fail("ladder.k_radial: must lie in (0, 1/4)");
  }
  if (!(config.slack > 0.0)) fail("ladder.slack: must be positive");
  return config;
}

json to_json(const LadderConfig& config) {
  json rings = json::array();
  for (const auto& ring : config.rings) rings.push_back(ring_to_json(ring));
  json epsilons = json::array();
  for (const double e : config.epsilons) epsilons.push_back(e);
  return json{{"schema_version", config.schema_version},
              {"epsilons", epsilons},
              {"rings", rings},
              {"field", {{"type", config.field.type}, {"c", config.field.c}}},
              {"T", config.T},
              {"delta_ratio", config.delta_ratio},
              {"dt_factor", config.dt_factor},
              {"resolution", config.resolution},
              {"snapshot_every", config.snapshot_every},
              {"threads", config.threads},
              {"slack", config.slack},
              {"k_radial", config.k_radial},
              {"min_fraction", config.min_fraction},
              {"radial_drift_tol", config.radial_drift_tol},
              {"guard", guard_to_json(config.guard)},
              {"output",
               {{"directory", config.output.directory},
                {"series", config.output.series},
                {"final_snapshot", config.output.final_snapshot}}}};
}

LadderConfig load_ladder_config(const std::filesystem::path& path) {
  return ladder_config_from_json(parse_file(path));
}

LadderSpec make_ladder_spec(const LadderConfig& config) {
  LadderSpec spec;
  spec.epsilons = config.epsilons;
  spec.rings = config.rings;
  spec.horizon = config.T;
  spec.delta_ratio = config.delta_ratio;
  spec.dt_factor = config.dt_factor;
  spec.resolution = config.resolution;
  spec.snapshot_every = config.snapshot_every;
  spec.threads = config.threads;
  spec.slack = config.slack;
  spec.k_radial = config.k_radial;
  spec.min_fraction = config.min_fraction;
  spec.radial_drift_tol = config.radial_drift_tol;
  spec.guard = config.guard;
  const FieldConfig field = config.field;
  spec.field_factory = [field](double eps) { return make_field(field, eps); };
  return spec;
}

}  // namespace vring
