#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "idt/ann.hpp"
#include "idt/csv.hpp"
#include "idt/error.hpp"
#include "idt/fixture.hpp"
#include "idt/hondros.hpp"
#include "idt/log.hpp"
#include "idt/pipeline.hpp"

namespace fs = std::filesystem;
using namespace idt;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::QuadratureFailure:
    case ErrorKind::FitFailure:
    case ErrorKind::TrainingFailure:
    case ErrorKind::Divergence:
    case ErrorKind::SolverDivergence:
    case ErrorKind::TuningConflict:
    case ErrorKind::DegenerateStrain:
    case ErrorKind::DegenerateDisplacements:
    case ErrorKind::SingularTemperature:
    case ErrorKind::MeshError:
      return kExitSolver;
    default:
      return kExitValidation;
  }
}

struct Common {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
};

pipeline::ProjectConfig load(const Common& c) {
  if (c.config.empty()) fail(ErrorKind::ConfigError, "--config is required");
  auto cfg = pipeline::load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
  return cfg;
}

void print_coefficients(const hondros::IdtGeometry& geom) {
  const auto k = hondros::geometric_coefficients(geom);
  csv::Writer w({"beta1", "beta2", "gamma1", "gamma2"});
  w.add_numeric_row({k.beta1, k.beta2, k.gamma1, k.gamma2});
  std::cout << w.str();
}

}  // namespace

int main(int argc, char** argv) {
  log::set_default_level(spdlog::level::info);
  CLI::App app{"IDT dynamic modulus pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pipeline::kVersion));

  Common common;
  std::string stages = "all";
  bool force = false;
  std::string features;
  std::string network;
  std::string fixture_kind = "synthetic";
  int fixture_groups = 3;

  auto* ingest = app.add_subcommand("ingest", "Validate the input files named by a config");
  auto* run = app.add_subcommand("run", "Run pipeline stages");
  auto* plots = app.add_subcommand("plots", "Write plot-ready CSV and JSON sidecars from run artifacts");
  auto* coeffs = app.add_subcommand("coeffs", "Print the geometric coefficients for a geometry");
  auto* predict = app.add_subcommand("predict", "Evaluate a network on a feature CSV");
  auto* fixture = app.add_subcommand("fixture", "Write a synthetic project or the published tables");

  for (auto* sub : {ingest, run, plots}) {
    sub->add_option("--config", common.config, "Project config JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Override the output directory");
  }
  run->add_option("--stages", stages, "'all' or a comma-separated list of reduce,characterize,backcalc,simulate,validate");
  run->add_flag("--force", force, "Re-run stages even when up to date");
  run->add_option("--seed", common.seed, "Override the config seed")->check(CLI::NonNegativeNumber);
  coeffs->add_option("--config", common.config, "Project config JSON (standard geometry if omitted)")
      ->check(CLI::ExistingFile);
  predict->add_option("features", features, "Feature CSV")->required()->check(CLI::ExistingFile);
  predict->add_option("--network", network, "Network JSON (default: bundled preset)")->check(CLI::ExistingFile);
  fixture->add_option("kind", fixture_kind, "synthetic or published")
      ->check(CLI::IsMember({"synthetic", "published"}));
  fixture->add_option("--out", common.out, "Destination directory")->required();
  fixture->add_option("--groups", fixture_groups, "Synthetic mixture groups")->check(CLI::PositiveNumber);
  fixture->add_option("--seed", common.seed, "Fixture seed")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors are validation errors; --help keeps its zero status.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ingest) {
      const auto project = pipeline::ingest(load(common));
      std::size_t binder = 0;
      std::size_t mixture = 0;
      for (const auto& [g, r] : project.binder) binder += r.size();
      for (const auto& [g, r] : project.mixture_moduli) mixture += r.size();
      std::cout << "mixtures " << project.mixtures.size() << "\nbinder records " << binder
                << "\nmixture modulus records " << mixture << '\n';
    } else if (*run) {
      const auto project = pipeline::ingest(load(common));
      pipeline::RunOptions opts;
      opts.stages = pipeline::parse_stages(stages);
      opts.force = force;
      const auto summary = pipeline::run_pipeline(project, opts);
      for (const auto& s : summary.stages) {
        std::cout << pipeline::to_string(s.stage) << ": " << (s.skipped ? "up to date" : "ran") << ", "
                  << s.outputs.size() << " output(s)\n";
        if (!s.notes.empty()) std::cout << "  " << s.notes.size() << " note(s) recorded in the stage manifest\n";
        for (const auto& n : s.notes) log::get().debug("{}", n);
      }
    } else if (*plots) {
      const auto cfg = load(common);
      const auto summary = pipeline::emit_plots(cfg.output_dir);
      for (const auto& f : summary.files) std::cout << f.string() << '\n';
      for (const auto& w : summary.warnings) log::get().warn("{}", w);
    } else if (*coeffs) {
      print_coefficients(common.config.empty() ? hondros::standard_geometry() : load(common).geometry);
    } else if (*predict) {
      const auto net = ann::load_network(network.empty() ? fs::path(IDT_ASSET_DIR) / "ann_preset_v1.json"
                                                         : fs::path(network));
      csv::Writer w({"row", "elastic_modulus_MPa"});
      const auto rows = pipeline::read_features(features);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::string> warnings;
        const double e = ann::forward(net, rows[i], &warnings);
        for (const auto& msg : warnings) log::get().warn("row {}: {}", i + 1, msg);
        w.add_row({std::to_string(i + 1), csv::format(e)});
      }
      std::cout << w.str();
    } else if (*fixture) {
      if (fixture_kind == "published") {
        fixture::write_published_tables(common.out);
      } else {
        fixture::SyntheticOptions opts;
        opts.groups = fixture_groups;
        if (common.seed >= 0) opts.seed = static_cast<std::uint64_t>(common.seed);
        const auto p = fixture::write_synthetic_project(common.out, opts);
        std::cout << p.config.string() << '\n';
      }
    }
  } catch (const Error& e) {
    log::get().error("{}", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    log::get().error("{}", e.what());
    return kExitValidation;
  }
  return 0;
}
