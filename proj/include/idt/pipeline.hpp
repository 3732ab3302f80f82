#pragma once

// Project configuration, ingestion and the staged run store behind the CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idt/ann.hpp"
#include "idt/fe.hpp"
#include "idt/hondros.hpp"
#include "idt/material.hpp"
#include "json.hpp"

namespace idt::pipeline {

inline constexpr std::uint64_t kDefaultSeed = 20240101;
inline constexpr const char* kVersion = "0.1.0";

struct AnnSpec {
  std::optional<std::filesystem::path> preset;         // network JSON
  std::optional<std::filesystem::path> training_data;  // 8 feature columns + elastic_modulus_MPa
  ann::TrainingConfig training;
};

struct ProjectConfig {
  hondros::IdtGeometry geometry = hondros::standard_geometry();
  double reference_temperature = 17.1;
  std::vector<double> temperatures;  // C
  std::vector<double> frequencies;   // Hz
  double poissons_ratio = 0.25;
  fe::SolverSettings solver;
  double mesh_size = 5.0;                         // mm
  std::vector<double> convergence_sizes;          // mm; empty skips the study
  std::vector<double> convergence_frequencies;    // Hz; empty uses the highest test frequency
  double prony_terms_per_decade = 10.0;
  double error_threshold = 0.20;
  AnnSpec ann;
  std::uint64_t seed = kDefaultSeed;

  std::filesystem::path mixtures;
  std::filesystem::path binder;
  std::filesystem::path mixture_moduli;
  std::optional<std::filesystem::path> signals;
  std::filesystem::path output_dir;

  /// Throws ConfigError on inconsistent settings.  `check_paths` also requires
  /// every input file to exist.
  void validate(bool check_paths = true) const;
};

/// Relative paths are resolved against `base_dir`.  Throws ConfigError.
ProjectConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ProjectConfig load_config(const std::filesystem::path& path);
/// Settings that determine the results (paths excluded).
nlohmann::json settings_json(const ProjectConfig& config);

struct MixtureRecord {
  std::string group;
  double rap_pct = 0.0;
  double ac_pct = 0.0;
  double vbeff_pct = 0.0;
  double vma_pct = 0.0;
  double vfa_pct = 0.0;
  double gmb = 0.0;
  double gmm = 0.0;
  double va_pct = 0.0;
  // Gradation is optional in the input; back-calculation needs it.
  std::optional<double> passing_half_inch_pct;
  std::optional<double> passing_three_eighths_pct;
  std::optional<double> passing_no4_pct;
  std::optional<double> passing_no200_pct;

  /// Throws InvalidArgument unless percentages lie in [0, 100] and Gmm >= Gmb > 0.
  void validate() const;
};

using GroupedModuli = std::map<std::string, std::vector<material::ComplexModulusRecord>>;

struct SignalSet {
  std::string group;
  double temperature = 0.0;
  double frequency = 0.0;
  std::filesystem::path load;        // time_s,value in kN
  std::filesystem::path vertical;    // mm
  std::filesystem::path horizontal;  // mm
};

struct Project {
  ProjectConfig config;
  std::vector<MixtureRecord> mixtures;
  GroupedModuli binder;
  GroupedModuli mixture_moduli;
  std::vector<SignalSet> signals;

  std::vector<std::string> groups() const;
};

// Schemas are strict: headers must match exactly.  A file is accepted whole
// or not at all; the error lists every bad row with its line number.
inline const std::vector<std::string> kMixtureHeader = {
    "group",   "rap_pct", "ac_pct", "vbeff_pct",          "vma_pct",         "vfa_pct",
    "gmb",     "gmm",     "va_pct", "passing_half_inch_pct", "passing_three_eighths_pct", "passing_no4_pct",
    "passing_no200_pct"};
inline const std::vector<std::string> kModulusHeader = {"group", "temperature_C", "frequency_Hz", "magnitude_MPa",
                                                        "phase_deg"};
inline const std::vector<std::string> kSignalHeader = {"group",    "temperature_C", "frequency_Hz",
                                                       "load_csv", "vertical_csv",  "horizontal_csv"};

std::vector<MixtureRecord> read_mixtures(const std::filesystem::path& path);
GroupedModuli read_grouped_moduli(const std::filesystem::path& path, bool require_phase);
std::vector<SignalSet> read_signal_index(const std::filesystem::path& path);
/// Columns: the 8 feature names followed by elastic_modulus_MPa.
std::vector<ann::Example> read_training_data(const std::filesystem::path& path);
/// Columns: the 8 feature names.
std::vector<ann::FeatureVector> read_features(const std::filesystem::path& path);

void write_mixtures(const std::vector<MixtureRecord>& mixtures, const std::filesystem::path& path);
void write_grouped_moduli(const GroupedModuli& moduli, const std::filesystem::path& path);
void write_training_data(const std::vector<ann::Example>& data, const std::filesystem::path& path);

/// Throws IngestionError (with file and line) or ConfigError.
Project ingest(const ProjectConfig& config);

enum class Stage { Reduce, Characterize, Backcalc, Simulate, Validate };

std::string_view to_string(Stage stage);
/// "all" or a comma-separated list; returned in pipeline order.
std::vector<Stage> parse_stages(std::string_view list);

struct StageOutcome {
  Stage stage = Stage::Reduce;
  bool skipped = false;  // up to date
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> notes;
};

struct RunOptions {
  std::vector<Stage> stages = {Stage::Reduce, Stage::Characterize, Stage::Backcalc, Stage::Simulate, Stage::Validate};
  bool force = false;
};

struct RunSummary {
  std::vector<StageOutcome> stages;
};

/// Runs the requested stages in order under config.output_dir/<stage>.  Each
/// stage writes a manifest.json with the hash of its inputs and of every
/// output; a stage whose inputs are unchanged and whose outputs are intact is
/// skipped unless forced.  A stage whose prerequisite was neither requested
/// nor run before raises DependencyError.
RunSummary run_pipeline(const Project& project, const RunOptions& options = {});

struct PlotSummary {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Plot-ready CSVs with JSON axis sidecars under output_dir/plots, built from
/// whatever stage artifacts exist; missing ones are listed as warnings.
PlotSummary emit_plots(const std::filesystem::path& output_dir);

/// 64-bit FNV-1a, hex encoded.
std::string content_hash(std::string_view bytes);
std::string file_hash(const std::filesystem::path& path);

/// Binder |G*| and phase at the reference temperature and `frequency`, taken
/// from the fitted Prony series, plus the mixture volumetrics and gradation.
ann::FeatureVector backcalc_features(const material::PronySeries& binder, const MixtureRecord& mixture,
                                     double frequency);

}  // namespace idt::pipeline
