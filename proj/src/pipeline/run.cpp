#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "idt/csv.hpp"
#include "idt/error.hpp"
#include "idt/log.hpp"
#include "idt/pipeline.hpp"
#include "idt/signal.hpp"
#include "idt/stats.hpp"

namespace idt::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr Stage kAllStages[] = {Stage::Reduce, Stage::Characterize, Stage::Backcalc, Stage::Simulate, Stage::Validate};

std::vector<Stage> dependencies(Stage s) {
  switch (s) {
    case Stage::Backcalc:
      return {Stage::Characterize};
    case Stage::Simulate:
      return {Stage::Characterize, Stage::Backcalc};
    case Stage::Validate:
      return {Stage::Simulate};
    default:
      return {};
  }
}

fs::path stage_dir(const ProjectConfig& c, Stage s) { return c.output_dir / std::string(to_string(s)); }

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::IngestionError, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) {
  try {
    return json::parse(read_text(p));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::IngestionError, p.string() + ": " + e.what());
  }
}

class StageWriter {
 public:
  explicit StageWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  const fs::path& dir() const { return dir_; }

  void csv(const std::string& name, const csv::Writer& w) {
    w.save(dir_ / name);
    files_.push_back(name);
  }

  void json_file(const std::string& name, const json& j) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) fail(ErrorKind::IngestionError, "cannot write " + (dir_ / name).string());
    out << j.dump(2) << '\n';
    files_.push_back(name);
  }

  // Registers a file written into the stage directory by someone else.
  void adopt(const std::string& name) {
    require(fs::exists(dir_ / name), ErrorKind::IngestionError, "missing stage output " + name);
    files_.push_back(name);
  }

  void note(std::string n) {
    log::get().warn("{}", n);
    notes_.push_back(std::move(n));
  }

  const std::vector<std::string>& files() const { return files_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
  std::vector<std::string> notes_;
};

// ---------------------------------------------------------------- manifests

std::string input_hash(const Project& p, Stage s) {
  const auto& c = p.config;
  json j;
  j["stage"] = to_string(s);
  j["version"] = kVersion;
  j["settings"] = settings_json(c);
  json inputs = json::object();
  auto add_file = [&](const std::string& key, const fs::path& path) { inputs[key] = file_hash(path); };
  auto add_stage = [&](Stage dep) {
    const auto m = stage_dir(c, dep) / "manifest.json";
    inputs[std::string("stage:") + std::string(to_string(dep))] = fs::exists(m) ? file_hash(m) : "missing";
  };
  switch (s) {
    case Stage::Reduce:
      if (c.signals) {
        add_file("signals", *c.signals);
        for (const auto& set : p.signals) {
          add_file(set.load.string(), set.load);
          add_file(set.vertical.string(), set.vertical);
          add_file(set.horizontal.string(), set.horizontal);
        }
      }
      break;
    case Stage::Characterize:
      add_file("binder", c.binder);
      add_file("mixture_moduli", c.mixture_moduli);
      break;
    case Stage::Backcalc:
      add_stage(Stage::Characterize);
      add_file("mixtures", c.mixtures);
      if (c.ann.preset) add_file("preset", *c.ann.preset);
      if (c.ann.training_data) add_file("training_data", *c.ann.training_data);
      break;
    case Stage::Simulate:
      add_stage(Stage::Characterize);
      add_stage(Stage::Backcalc);
      break;
    case Stage::Validate:
      add_stage(Stage::Simulate);
      add_file("mixture_moduli", c.mixture_moduli);
      if (fs::exists(stage_dir(c, Stage::Reduce) / "manifest.json")) add_stage(Stage::Reduce);
      break;
  }
  j["inputs"] = inputs;
  return content_hash(j.dump());
}

bool up_to_date(const fs::path& dir, const std::string& hash) {
  const auto path = dir / "manifest.json";
  if (!fs::exists(path)) return false;
  try {
    const json m = read_json(path);
    if (m.at("input_hash").get<std::string>() != hash) return false;
    for (const auto& o : m.at("outputs")) {
      const auto file = dir / o.at("file").get<std::string>();
      if (!fs::exists(file) || file_hash(file) != o.at("hash").get<std::string>()) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void write_manifest(const StageWriter& w, Stage s, const std::string& hash, const ProjectConfig& c) {
  json m;
  m["stage"] = to_string(s);
  m["version"] = kVersion;
  m["input_hash"] = hash;
  m["settings"] = settings_json(c);
  m["notes"] = w.notes();
  json outputs = json::array();
  for (const auto& f : w.files()) outputs.push_back({{"file", f}, {"hash", file_hash(w.dir() / f)}});
  m["outputs"] = outputs;
  std::ofstream out(w.dir() / "manifest.json", std::ios::binary);
  out << m.dump(2) << '\n';
}

// ------------------------------------------------------------------- stages

void run_reduce(const Project& p, StageWriter& w) {
  csv::Writer moduli(kModulusHeader);
  csv::Writer detail({"group", "temperature_C", "frequency_Hz", "load_kN", "vertical_mm", "horizontal_mm",
                      "phase_deg", "magnitude_MPa"});
  if (p.signals.empty()) w.note("no signal index configured; nothing to reduce");
  const auto coeffs = hondros::geometric_coefficients(p.config.geometry);
  const int cycles = p.config.solver.reduction_cycles;
  for (const auto& s : p.signals) {
    auto fit = [&](const fs::path& path, signal::Unit unit) {
      const auto series = signal::read_series_csv(path, unit);
      series.validate(s.frequency);
      return signal::fit_sinusoid(signal::last_n_cycles(series, s.frequency, cycles), s.frequency);
    };
    const auto load = fit(s.load, signal::Unit::ForceKN);
    const auto vertical = fit(s.vertical, signal::Unit::DisplacementMM);
    const auto horizontal = fit(s.horizontal, signal::Unit::DisplacementMM);
    const double e = hondros::idt_dynamic_modulus(p.config.geometry, coeffs, load.amplitude, vertical.amplitude,
                                                  horizontal.amplitude);
    const double phase = signal::relative_phase(load, horizontal, 1e-3) * 180.0 / std::numbers::pi;
    const double phase_deg = std::clamp(phase, 0.0, 90.0);
    moduli.add_row({s.group, csv::format(s.temperature), csv::format(s.frequency), csv::format(e), csv::format(phase_deg)});
    detail.add_row({s.group, csv::format(s.temperature), csv::format(s.frequency), csv::format(load.amplitude),
                    csv::format(vertical.amplitude), csv::format(horizontal.amplitude), csv::format(phase_deg),
                    csv::format(e)});
  }
  w.csv("reduced_moduli.csv", moduli);
  w.csv("reduced_signals.csv", detail);
}

int prony_terms(const std::vector<material::ComplexModulusRecord>& shifted, double per_decade) {
  double lo = shifted.front().frequency, hi = lo;
  for (const auto& r : shifted) {
    lo = std::min(lo, r.frequency);
    hi = std::max(hi, r.frequency);
  }
  const double decades = std::log10(hi / lo) + 2.0 * material::PronyFitOptions{}.decade_padding;
  return std::max(4, static_cast<int>(std::ceil(decades * per_decade)) + 1);
}

void run_characterize(const Project& p, StageWriter& w) {
  const double ts = p.config.reference_temperature;
  json groups = json::object();
  csv::Writer curves({"group", "source", "temperature_C", "frequency_Hz", "log10_reduced_frequency", "log10_modulus",
                      "log10_modulus_fit"});
  csv::Writer shifts({"group", "source", "temperature_C", "log10_shift", "wlf_log10_shift"});
  csv::Writer prony_csv({"group", "term", "g", "tau_s"});

  auto emit_curve = [&](const std::string& group, const char* source, const material::MasterCurve& mc,
                        const std::vector<material::ComplexModulusRecord>& records) {
    for (const auto& r : records) {
      const double x = std::log10(r.frequency) + mc.shift_at(r.temperature);
      curves.add_row({group, source, csv::format(r.temperature), csv::format(r.frequency), csv::format(x),
                      csv::format(std::log10(r.magnitude)), csv::format(mc.sigmoid.log_modulus(x))});
    }
  };

  for (const auto& group : p.groups()) {
    const auto binder = p.binder.find(group);
    if (binder == p.binder.end()) {
      w.note("group " + group + " has no binder data and cannot be characterized");
      continue;
    }
    json g;
    const auto binder_curve = material::build_master_curve(binder->second, ts);
    const auto wlf = material::fit_wlf(binder_curve.shift_factors, ts);
    const auto shifted = material::shift_to_reference(binder->second, binder_curve.shift_factors, ts);
    const auto prony = material::fit_prony(shifted, prony_terms(shifted, p.config.prony_terms_per_decade));
    g["binder_master_curve"] = material::to_json(binder_curve);
    g["wlf"] = material::to_json(wlf.params);
    g["wlf_rms_residual"] = wlf.rms_residual;
    g["binder_prony"] = material::to_json(prony);
    emit_curve(group, "binder", binder_curve, binder->second);
    for (const auto& [t, s] : binder_curve.shift_factors) {
      shifts.add_row({group, "binder", csv::format(t), csv::format(s), csv::format(material::wlf_shift(wlf.params, t))});
    }
    for (std::size_t i = 0; i < prony.terms.size(); ++i) {
      prony_csv.add_row({group, std::to_string(i + 1), csv::format(prony.terms[i].g), csv::format(prony.terms[i].tau)});
    }
    const auto mix = p.mixture_moduli.find(group);
    if (mix != p.mixture_moduli.end()) {
      std::set<double> temps;
      for (const auto& r : mix->second) temps.insert(r.temperature);
      if (temps.count(ts) && mix->second.size() >= 4) {
        const auto mc = material::build_master_curve(mix->second, ts);
        g["mixture_master_curve"] = material::to_json(mc);
        emit_curve(group, "mixture", mc, mix->second);
        for (const auto& [t, s] : mc.shift_factors) shifts.add_row({group, "mixture", csv::format(t), csv::format(s), ""});
      } else {
        w.note("group " + group + ": mixture data do not cover the reference temperature; no mixture master curve");
      }
    }
    groups[group] = g;
    log::get().info("characterized group {}: {} Prony terms, C1 {:.4g}, C2 {:.4g}", group, prony.terms.size(),
                    wlf.params.c1, wlf.params.c2);
  }
  w.json_file("materials.json", {{"reference_temperature_C", ts}, {"groups", groups}});
  w.csv("master_curves.csv", curves);
  w.csv("shift_factors.csv", shifts);
  w.csv("prony_terms.csv", prony_csv);
}

void run_backcalc(const Project& p, StageWriter& w) {
  const json materials = read_json(stage_dir(p.config, Stage::Characterize) / "materials.json");
  ann::NetworkParameters net;
  if (p.config.ann.preset) {
    net = ann::load_network(*p.config.ann.preset);
    w.note("using network preset " + p.config.ann.preset->filename().string());
  } else {
    const auto data = read_training_data(*p.config.ann.training_data);
    const auto split = ann::split(data, p.config.seed);
    auto cfg = p.config.ann.training;
    cfg.seed = p.config.seed;
    const auto result = ann::train(split, cfg);
    net = result.params;
    const auto& r = result.report;
    csv::Writer history({"iteration", "train_mse", "validation_mse"});
    for (std::size_t i = 0; i < r.train_mse.size(); ++i) {
      history.add_row({std::to_string(i + 1), csv::format(r.train_mse[i]), csv::format(r.validation_mse[i])});
    }
    w.csv("training_history.csv", history);
    w.json_file("training_report.json", {{"examples", data.size()},
                                         {"training", split.training.size()},
                                         {"validation", split.validation.size()},
                                         {"testing", split.testing.size()},
                                         {"best_iteration", r.best_iteration},
                                         {"iterations", r.iterations},
                                         {"best_restart", r.best_restart},
                                         {"stop_reason", r.stop_reason},
                                         {"test_mse_MPa2", r.test_mse},
                                         {"test_r_fit", std::isfinite(r.test_r_fit) ? json(r.test_r_fit) : json()},
                                         {"train_r_fit", r.train_r_fit},
                                         {"seed", p.config.seed}});
    log::get().info("trained network: test r_fit {:.5f} after {} iterations", r.test_r_fit, r.iterations);
  }
  w.json_file("network.json", ann::to_json(net));

  const double feature_frequency = *std::max_element(p.config.frequencies.begin(), p.config.frequencies.end());
  std::vector<std::string> header = {"group"};
  header.insert(header.end(), ann::kFeatureNames.begin(), ann::kFeatureNames.end());
  header.push_back("elastic_modulus_MPa");
  csv::Writer table(header);
  json moduli = json::object();
  for (const auto& m : p.mixtures) {
    if (!materials.at("groups").contains(m.group)) continue;
    const auto binder = material::prony_from_json(materials.at("groups").at(m.group).at("binder_prony"));
    const auto features = backcalc_features(binder, m, feature_frequency);
    std::vector<std::string> warnings;
    const double e = ann::forward(net, features, &warnings);
    for (const auto& msg : warnings) w.note("group " + m.group + ": " + msg);
    require(e > 0.0 && std::isfinite(e), ErrorKind::InvalidArgument,
            "network returned a non-positive modulus for group " + m.group);
    const auto v = features.to_vector();
    std::vector<std::string> row = {m.group};
    for (int k = 0; k < ann::kInputs; ++k) row.push_back(csv::format(v[k]));
    row.push_back(csv::format(e));
    table.add_row(row);
    moduli[m.group] = e;
  }
  w.csv("elastic_moduli.csv", table);
  w.json_file("elastic_moduli.json", {{"feature_frequency_Hz", feature_frequency}, {"elastic_modulus_MPa", moduli}});
}

fe::ViscoelasticMaterial group_material(const json& materials, const json& moduli, const std::string& group,
                                        double poissons_ratio) {
  fe::ViscoelasticMaterial m;
  m.instantaneous_youngs_modulus = moduli.at("elastic_modulus_MPa").at(group).get<double>();
  m.poissons_ratio = poissons_ratio;
  m.shear_prony = material::prony_from_json(materials.at("groups").at(group).at("binder_prony"));
  m.wlf = material::wlf_from_json(materials.at("groups").at(group).at("wlf"));
  m.validate();
  return m;
}

void run_simulate(const Project& p, StageWriter& w) {
  const auto& c = p.config;
  const json materials = read_json(stage_dir(c, Stage::Characterize) / "materials.json");
  const json moduli = read_json(stage_dir(c, Stage::Backcalc) / "elastic_moduli.json");
  fe::PredictionOptions options;
  options.mesh_size = c.mesh_size;
  options.solver = c.solver;

  csv::Writer predicted({"group", "temperature_C", "frequency_Hz", "magnitude_MPa", "phase_deg", "load_kN",
                         "log10_reduced_frequency"});
  csv::Writer failures({"group", "temperature_C", "frequency_Hz", "message"});
  json records = json::object();
  json runs = json::object();
  const auto mesh = fe::build_mesh(c.geometry.diameter, c.geometry.thickness, c.mesh_size);
  std::optional<fe::ViscoelasticMaterial> first;

  for (const auto& group : p.groups()) {
    if (!materials.at("groups").contains(group) || !moduli.at("elastic_modulus_MPa").contains(group)) continue;
    const auto material = group_material(materials, moduli, group, c.poissons_ratio);
    if (!first) first = material;
    log::get().info("simulating group {} (E0 {:.6g} MPa)", group, material.instantaneous_youngs_modulus);
    const auto prediction = fe::predict_dynamic_modulus(material, c.geometry, c.frequencies, c.temperatures, options);
    for (const auto& n : prediction.notes) w.note("group " + group + ": " + n);
    json rows = json::array();
    for (std::size_t i = 0; i < prediction.records.size(); ++i) {
      const auto& r = prediction.records[i];
      const double x = std::log10(r.frequency) + material.log_shift(r.temperature);
      predicted.add_row({group, csv::format(r.temperature), csv::format(r.frequency), csv::format(r.magnitude),
                         csv::format(*r.phase_deg), csv::format(prediction.loads_kn[i]), csv::format(x)});
      rows.push_back({{"temperature_C", r.temperature},
                      {"frequency_Hz", r.frequency},
                      {"magnitude_MPa", r.magnitude},
                      {"phase_deg", *r.phase_deg},
                      {"load_kN", prediction.loads_kn[i]}});
    }
    for (const auto& f : prediction.failures) {
      failures.add_row({group, csv::format(f.temperature), csv::format(f.frequency), f.message});
      w.note("group " + group + ": simulation failed at T=" + csv::format(f.temperature) +
             " C, f=" + csv::format(f.frequency) + " Hz: " + f.message);
    }
    records[group] = rows;
    runs[group] = fe::run_manifest(mesh, material, c.geometry, c.solver);
  }
  w.csv("predicted_moduli.csv", predicted);
  w.csv("failures.csv", failures);
  w.json_file("predictions.json", {{"groups", records}});
  w.json_file("fe_runs.json", runs);
  fe::write_mesh_csv(mesh, w.dir() / "mesh_nodes.csv", w.dir() / "mesh_elements.csv");
  w.adopt("mesh_nodes.csv");
  w.adopt("mesh_elements.csv");

  if (!c.convergence_sizes.empty() && first) {
    std::vector<double> freqs = c.convergence_frequencies;
    if (freqs.empty()) freqs = {*std::max_element(c.frequencies.begin(), c.frequencies.end())};
    const auto report = fe::mesh_convergence_study(*first, c.geometry, freqs, c.convergence_sizes,
                                                   c.reference_temperature, c.solver);
    csv::Writer conv({"frequency_Hz", "size_mm", "element_count", "modulus_MPa", "phase_deg", "relative_error",
                      "u1_relative_error"});
    for (const auto& r : report.rows) {
      conv.add_row({csv::format(r.frequency), csv::format(r.size), std::to_string(r.element_count),
                    csv::format(r.modulus), csv::format(r.phase_deg), csv::format(r.relative_error),
                    csv::format(r.u1_relative_error)});
    }
    for (const auto& warning : report.warnings) w.note("convergence: " + warning);
    w.csv("convergence.csv", conv);
  }
}

struct Key {
  std::string group;
  double temperature;
  double frequency;
  bool operator<(const Key& o) const {
    return std::tie(group, temperature, frequency) < std::tie(o.group, o.temperature, o.frequency);
  }
};

void run_validate(const Project& p, StageWriter& w) {
  const auto& c = p.config;
  std::map<Key, double> measured;
  for (const auto& [group, records] : p.mixture_moduli) {
    for (const auto& r : records) measured[{group, r.temperature, r.frequency}] = r.magnitude;
  }
  const auto reduced = stage_dir(c, Stage::Reduce) / "reduced_moduli.csv";
  if (fs::exists(reduced)) {
    const auto t = csv::read(reduced);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      measured[{r[0], csv::parse_number(r[1], reduced, t.line_numbers[i]),
                csv::parse_number(r[2], reduced, t.line_numbers[i])}] = csv::parse_number(r[3], reduced, t.line_numbers[i]);
    }
  }

  const json predictions = read_json(stage_dir(c, Stage::Simulate) / "predictions.json");
  std::vector<stats::PredictionPair> pairs;
  for (const auto& [group, rows] : predictions.at("groups").items()) {
    for (const auto& r : rows) {
      const double t = r.at("temperature_C").get<double>();
      const double f = r.at("frequency_Hz").get<double>();
      const auto it = std::find_if(measured.begin(), measured.end(), [&](const auto& m) {
        return m.first.group == group && std::abs(m.first.temperature - t) <= 1e-9 &&
               std::abs(m.first.frequency - f) <= 1e-9 * f;
      });
      if (it == measured.end()) continue;
      pairs.push_back({it->second, r.at("magnitude_MPa").get<double>(), group, t, f});
    }
  }
  require(!pairs.empty(), ErrorKind::InsufficientData, "no predicted point has a matching measurement");

  const auto res = stats::residuals(pairs);
  csv::Writer pair_csv({"group", "temperature_C", "frequency_Hz", "measured_MPa", "predicted_MPa", "residual_MPa",
                        "relative_error"});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& q = pairs[i];
    pair_csv.add_row({q.group, csv::format(q.temperature), csv::format(q.frequency), csv::format(q.measured),
                      csv::format(q.predicted), csv::format(res.values[i]),
                      csv::format(std::abs(res.values[i]) / q.measured)});
  }
  w.csv("pairs.csv", pair_csv);

  const auto curve = stats::accuracy_curve(pairs, stats::default_tolerances());
  csv::Writer acc({"tolerance", "accuracy"});
  for (const auto& pt : curve.points) acc.add_numeric_row({pt.tolerance, pt.accuracy});
  w.csv("accuracy_curve.csv", acc);

  const auto report = stats::relative_error_report(pairs, c.error_threshold);
  csv::Writer groups({"group", "count", "max_relative_error", "mean_relative_error", "flagged"});
  for (const auto& g : report.groups) {
    groups.add_row({g.group, std::to_string(g.count), csv::format(g.max_relative), csv::format(g.mean_relative),
                    g.flagged ? "1" : "0"});
    if (g.flagged) w.note("group " + g.group + " exceeds the relative error threshold");
  }
  w.csv("group_errors.csv", groups);

  json hist_json = nullptr;
  if (pairs.size() >= 2) {
    const auto h = stats::residual_histogram(res.values, 10);
    csv::Writer hist({"bin_lower_MPa", "bin_upper_MPa", "count", "normal_overlay"});
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      hist.add_numeric_row({h.edge(k), h.edge(k + 1), static_cast<double>(h.counts[k]), h.overlay(h.centre(k))});
    }
    w.csv("residual_histogram.csv", hist);
    hist_json = {{"mean", h.mean}, {"std", h.std}, {"degenerate", h.degenerate}};
  }

  const auto mc = stats::mean_comparison(pairs);
  csv::Writer mean({"mean_MPa", "difference_MPa"});
  for (const auto& pt : mc.points) mean.add_numeric_row({pt.mean, pt.difference});
  w.csv("mean_comparison.csv", mean);

  json summary;
  summary["pairs"] = pairs.size();
  double r = std::numeric_limits<double>::quiet_NaN();
  try {
    r = stats::r_fit(pairs);
  } catch (const Error&) {
    w.note("r_fit is undefined for these pairs");
  }
  summary["r_fit"] = std::isfinite(r) ? json(r) : json();
  summary["residual_mean_MPa"] = res.summary.mean;
  summary["residual_std_MPa"] = res.summary.std ? json(*res.summary.std) : json();
  summary["max_relative_error"] = report.overall_max;
  summary["mean_relative_error"] = report.overall_mean;
  summary["error_threshold"] = report.threshold;
  summary["any_group_flagged"] = report.any_flagged;
  summary["bias_MPa"] = mc.bias;
  summary["limits_of_agreement_MPa"] =
      mc.lower_limit ? json::array({*mc.lower_limit, *mc.upper_limit}) : json::array();
  summary["histogram"] = hist_json;
  w.json_file("summary.json", summary);
  log::get().info("validated {} pairs: max relative error {:.4f}, r_fit {:.4f}", pairs.size(), report.overall_max, r);
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Reduce:
      return "reduce";
    case Stage::Characterize:
      return "characterize";
    case Stage::Backcalc:
      return "backcalc";
    case Stage::Simulate:
      return "simulate";
    case Stage::Validate:
      return "validate";
  }
  return "unknown";
}

std::vector<Stage> parse_stages(std::string_view list) {
  if (list == "all") return {std::begin(kAllStages), std::end(kAllStages)};
  std::set<Stage> chosen;
  for (const auto& item : csv::split_line(list)) {
    bool found = false;
    for (Stage s : kAllStages) {
      if (item == to_string(s)) {
        chosen.insert(s);
        found = true;
      }
    }
    require(found, ErrorKind::InvalidArgument, "unknown stage '" + item + "'");
  }
  require(!chosen.empty(), ErrorKind::InvalidArgument, "no stages given");
  return {chosen.begin(), chosen.end()};
}

ann::FeatureVector backcalc_features(const material::PronySeries& binder, const MixtureRecord& mixture,
                                     double frequency) {
  require(mixture.passing_half_inch_pct && mixture.passing_three_eighths_pct && mixture.passing_no4_pct &&
              mixture.passing_no200_pct,
          ErrorKind::InvalidArgument, "group " + mixture.group + " has no gradation; back-calculation needs it");
  const double omega = 2.0 * std::numbers::pi * frequency;
  ann::FeatureVector f;
  f.complex_modulus = binder.magnitude(omega);
  f.phase_angle = binder.phase(omega) * 180.0 / std::numbers::pi;
  f.vbeff_pct = mixture.vbeff_pct;
  f.va_pct = mixture.va_pct;
  f.passing_half_inch_pct = *mixture.passing_half_inch_pct;
  f.passing_three_eighths_pct = *mixture.passing_three_eighths_pct;
  f.passing_no4_pct = *mixture.passing_no4_pct;
  f.passing_no200_pct = *mixture.passing_no200_pct;
  return f;
}

RunSummary run_pipeline(const Project& project, const RunOptions& options) {
  const auto& c = project.config;
  require(!options.stages.empty(), ErrorKind::InvalidArgument, "no stages requested");
  std::set<Stage> requested(options.stages.begin(), options.stages.end());
  RunSummary summary;
  for (Stage stage : kAllStages) {
    if (!requested.count(stage)) continue;
    for (Stage dep : dependencies(stage)) {
      if (requested.count(dep)) continue;
      const auto dir = stage_dir(c, dep);
      if (!up_to_date(dir, input_hash(project, dep))) {
        fail(ErrorKind::DependencyError, std::string(to_string(stage)) + " needs an up-to-date " +
                                             std::string(to_string(dep)) + " stage; run it first");
      }
    }
    const auto dir = stage_dir(c, stage);
    const auto hash = input_hash(project, stage);
    StageOutcome outcome;
    outcome.stage = stage;
    if (!options.force && up_to_date(dir, hash)) {
      outcome.skipped = true;
      log::get().info("stage {} is up to date", to_string(stage));
      summary.stages.push_back(outcome);
      continue;
    }
    log::get().info("running stage {}", to_string(stage));
    fs::remove_all(dir);
    StageWriter w(dir);
    switch (stage) {
      case Stage::Reduce:
        run_reduce(project, w);
        break;
      case Stage::Characterize:
        run_characterize(project, w);
        break;
      case Stage::Backcalc:
        run_backcalc(project, w);
        break;
      case Stage::Simulate:
        run_simulate(project, w);
        break;
      case Stage::Validate:
        run_validate(project, w);
        break;
    }
    write_manifest(w, stage, hash, c);
    for (const auto& f : w.files()) outcome.outputs.push_back(dir / f);
    outcome.notes = w.notes();
    summary.stages.push_back(outcome);
  }
  return summary;
}

}  // namespace idt::pipeline
