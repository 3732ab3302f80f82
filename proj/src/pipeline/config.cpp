#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "idt/error.hpp"
#include "idt/pipeline.hpp"

namespace idt::pipeline {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::ConfigError, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) fail(ErrorKind::ConfigError, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(ErrorKind::ConfigError, "missing key '" + key + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::ConfigError, "key '" + key + "' in " + where + " has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

void ProjectConfig::validate(bool check_paths) const {
  try {
    geometry.validate();
  } catch (const Error& e) {
    fail(ErrorKind::ConfigError, std::string("geometry: ") + e.what());
  }
  require(!temperatures.empty(), ErrorKind::ConfigError, "no test temperatures configured");
  require(!frequencies.empty(), ErrorKind::ConfigError, "no test frequencies configured");
  for (double f : frequencies) {
    require(f > 0.0 && std::isfinite(f), ErrorKind::ConfigError, "frequencies must be positive");
  }
  std::vector<double> t = temperatures;
  std::sort(t.begin(), t.end());
  require(std::adjacent_find(t.begin(), t.end()) == t.end(), ErrorKind::ConfigError, "temperatures must be distinct");
  require(poissons_ratio > 0.0 && poissons_ratio < 0.5, ErrorKind::ConfigError, "Poisson's ratio must lie in (0, 0.5)");
  require(mesh_size > 0.0 && mesh_size < geometry.diameter / 4.0, ErrorKind::ConfigError,
          "mesh size must lie in (0, diameter/4)");
  for (double h : convergence_sizes) {
    require(h > 0.0 && h < geometry.diameter / 4.0, ErrorKind::ConfigError, "convergence sizes must lie in (0, diameter/4)");
  }
  require(convergence_sizes.empty() || convergence_sizes.size() >= 3, ErrorKind::ConfigError,
          "a convergence study needs at least 3 mesh sizes");
  require(solver.steps_per_cycle >= 40, ErrorKind::ConfigError, "steps_per_cycle must be at least 40");
  require(solver.n_cycles >= 8, ErrorKind::ConfigError, "n_cycles must be at least 8");
  require(solver.reduction_cycles >= 1 && solver.reduction_cycles < solver.n_cycles, ErrorKind::ConfigError,
          "reduction_cycles must be at least 1 and fewer than n_cycles");
  require(prony_terms_per_decade >= 1.0, ErrorKind::ConfigError, "prony terms_per_decade must be at least 1");
  require(error_threshold > 0.0, ErrorKind::ConfigError, "error threshold must be positive");
  require(ann.preset.has_value() != ann.training_data.has_value(), ErrorKind::ConfigError,
          "ann needs exactly one of 'preset' or 'training_data'");
  require(!output_dir.empty(), ErrorKind::ConfigError, "output_dir is not set");
  if (!check_paths) return;
  auto exists = [](const std::filesystem::path& p, const std::string& what) {
    require(std::filesystem::is_regular_file(p), ErrorKind::ConfigError, what + " not found: " + p.string());
  };
  exists(mixtures, "mixtures file");
  exists(binder, "binder file");
  exists(mixture_moduli, "mixture moduli file");
  if (signals) exists(*signals, "signal index");
  if (ann.preset) exists(*ann.preset, "network preset");
  if (ann.training_data) exists(*ann.training_data, "training data");
}

ProjectConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j,
                 {"geometry", "reference_temperature_C", "temperatures_C", "frequencies_Hz", "poissons_ratio", "solver",
                  "prony", "ann", "validation", "seed", "inputs", "output_dir"},
                 "config");
  ProjectConfig c;
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    reject_unknown(g, {"diameter_mm", "thickness_mm", "gage_length_mm", "strip_half_angle_rad", "strip_width_mm"},
                   "geometry");
    const double d = get<double>(g, "diameter_mm", "geometry");
    const double t = get<double>(g, "thickness_mm", "geometry");
    const double l = get<double>(g, "gage_length_mm", "geometry");
    try {
      if (g.contains("strip_half_angle_rad") == g.contains("strip_width_mm")) {
        fail(ErrorKind::ConfigError, "geometry needs exactly one of strip_half_angle_rad or strip_width_mm");
      }
      c.geometry = g.contains("strip_half_angle_rad")
                       ? hondros::IdtGeometry::from_half_angle(d, t, l, get<double>(g, "strip_half_angle_rad", "geometry"))
                       : hondros::IdtGeometry::from_strip_width(d, t, l, get<double>(g, "strip_width_mm", "geometry"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigError) throw;
      fail(ErrorKind::ConfigError, std::string("geometry: ") + e.what());
    }
  }
  c.reference_temperature = get_or<double>(j, "reference_temperature_C", c.reference_temperature, "config");
  c.temperatures = get<std::vector<double>>(j, "temperatures_C", "config");
  c.frequencies = get<std::vector<double>>(j, "frequencies_Hz", "config");
  c.poissons_ratio = get_or<double>(j, "poissons_ratio", c.poissons_ratio, "config");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s,
                   {"steps_per_cycle", "n_cycles", "reduction_cycles", "drift_tolerance", "mesh_size_mm",
                    "convergence_sizes_mm", "convergence_frequencies_Hz"},
                   "solver");
    c.solver.steps_per_cycle = get_or<int>(s, "steps_per_cycle", c.solver.steps_per_cycle, "solver");
    c.solver.n_cycles = get_or<int>(s, "n_cycles", c.solver.n_cycles, "solver");
    c.solver.reduction_cycles = get_or<int>(s, "reduction_cycles", c.solver.reduction_cycles, "solver");
    c.solver.drift_tolerance = get_or<double>(s, "drift_tolerance", c.solver.drift_tolerance, "solver");
    c.mesh_size = get_or<double>(s, "mesh_size_mm", c.mesh_size, "solver");
    c.convergence_sizes = get_or<std::vector<double>>(s, "convergence_sizes_mm", {}, "solver");
    c.convergence_frequencies = get_or<std::vector<double>>(s, "convergence_frequencies_Hz", {}, "solver");
  }
  if (j.contains("prony")) {
    reject_unknown(j.at("prony"), {"terms_per_decade"}, "prony");
    c.prony_terms_per_decade = get_or<double>(j.at("prony"), "terms_per_decade", c.prony_terms_per_decade, "prony");
  }
  if (j.contains("validation")) {
    reject_unknown(j.at("validation"), {"error_threshold"}, "validation");
    c.error_threshold = get_or<double>(j.at("validation"), "error_threshold", c.error_threshold, "validation");
  }
  c.seed = get_or<std::uint64_t>(j, "seed", kDefaultSeed, "config");

  const json& a = j.contains("ann") ? j.at("ann") : json::object();
  reject_unknown(a, {"preset", "training_data", "hidden", "max_iterations", "patience", "restarts"}, "ann");
  if (a.contains("preset")) c.ann.preset = resolve(base_dir, get<std::string>(a, "preset", "ann"));
  if (a.contains("training_data")) c.ann.training_data = resolve(base_dir, get<std::string>(a, "training_data", "ann"));
  c.ann.training.hidden = get_or<int>(a, "hidden", c.ann.training.hidden, "ann");
  c.ann.training.max_iterations = get_or<int>(a, "max_iterations", c.ann.training.max_iterations, "ann");
  c.ann.training.patience = get_or<int>(a, "patience", c.ann.training.patience, "ann");
  c.ann.training.restarts = get_or<int>(a, "restarts", c.ann.training.restarts, "ann");
  c.ann.training.seed = c.seed;

  const json& in = j.contains("inputs") ? j.at("inputs") : json::object();
  reject_unknown(in, {"mixtures", "binder", "mixture_moduli", "signals"}, "inputs");
  c.mixtures = resolve(base_dir, get<std::string>(in, "mixtures", "inputs"));
  c.binder = resolve(base_dir, get<std::string>(in, "binder", "inputs"));
  c.mixture_moduli = resolve(base_dir, get<std::string>(in, "mixture_moduli", "inputs"));
  if (in.contains("signals")) c.signals = resolve(base_dir, get<std::string>(in, "signals", "inputs"));
  c.output_dir = resolve(base_dir, get_or<std::string>(j, "output_dir", "out", "config"));
  c.validate(false);
  return c;
}

ProjectConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::absolute(path).parent_path());
}

json settings_json(const ProjectConfig& c) {
  json j;
  j["geometry"] = {{"diameter_mm", c.geometry.diameter},
                   {"thickness_mm", c.geometry.thickness},
                   {"gage_length_mm", c.geometry.gage_length},
                   {"strip_half_angle_rad", c.geometry.strip_half_angle}};
  j["reference_temperature_C"] = c.reference_temperature;
  j["temperatures_C"] = c.temperatures;
  j["frequencies_Hz"] = c.frequencies;
  j["poissons_ratio"] = c.poissons_ratio;
  j["solver"] = {{"steps_per_cycle", c.solver.steps_per_cycle},
                 {"n_cycles", c.solver.n_cycles},
                 {"reduction_cycles", c.solver.reduction_cycles},
                 {"drift_tolerance", c.solver.drift_tolerance},
                 {"mesh_size_mm", c.mesh_size},
                 {"convergence_sizes_mm", c.convergence_sizes},
                 {"convergence_frequencies_Hz", c.convergence_frequencies}};
  j["prony"] = {{"terms_per_decade", c.prony_terms_per_decade}};
  j["ann"] = {{"mode", c.ann.preset ? "preset" : "train"},
              {"hidden", c.ann.training.hidden},
              {"max_iterations", c.ann.training.max_iterations},
              {"patience", c.ann.training.patience},
              {"restarts", c.ann.training.restarts}};
  j["validation"] = {{"error_threshold", c.error_threshold}};
  j["seed"] = c.seed;
  return j;
}

}  // namespace idt::pipeline
