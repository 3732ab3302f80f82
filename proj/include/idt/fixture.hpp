#pragma once

// Reproducible synthetic data sets: a hidden network standing in for the
// unpublished training database, complete synthetic projects whose mixture
// moduli are known in closed form, and the published mixture tables as
// ingestion fixtures.

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "idt/ann.hpp"
#include "idt/fe.hpp"
#include "idt/pipeline.hpp"

namespace idt::fixture {

/// Feature ranges of the training database (Va widened to [3.9, 4.1] so the
/// column is not constant).
extern const std::array<double, ann::kInputs> kFeatureMin;
extern const std::array<double, ann::kInputs> kFeatureMax;

/// 8-10-1 network with uniform random weights whose output maps to
/// [1000, 30000] MPa.
ann::NetworkParameters hidden_network(std::uint64_t seed = 7);

/// Features uniform over [min, max]; targets from `net`, optionally with
/// uniform multiplicative noise of standard deviation `noise`.
std::vector<ann::Example> sample_dataset(const ann::NetworkParameters& net, std::size_t count, double noise,
                                         std::uint64_t seed, const std::array<double, ann::kInputs>& min = kFeatureMin,
                                         const std::array<double, ann::kInputs>& max = kFeatureMax);

struct SyntheticOptions {
  int groups = 3;
  std::vector<double> temperatures = {0.4, 17.1, 33.8};
  std::vector<double> frequencies = {25.0, 10.0, 1.0, 0.1};
  std::vector<double> binder_frequencies = {25.0, 20.0, 10.0, 5.0, 2.0, 1.0, 0.5, 0.2, 0.1};
  std::size_t training_examples = 1000;
  double mesh_size = 5.0;
  std::uint64_t seed = 11;
};

/// Ground truth behind a synthetic project.
struct SyntheticGroup {
  std::string name;
  fe::ViscoelasticMaterial material;  // instantaneous modulus from the hidden network
  material::PronySeries binder;       // absolute binder moduli, MPa
  pipeline::MixtureRecord mixture;
};

struct SyntheticProject {
  std::vector<SyntheticGroup> groups;
  ann::NetworkParameters network;
  std::filesystem::path config;
};

/// Writes mixtures.csv, binder.csv, mixture_moduli.csv (closed-form moduli of
/// the proportional model), ann_training.csv and config.json into `dir`.
SyntheticProject write_synthetic_project(const std::filesystem::path& dir, const SyntheticOptions& options = {});

/// The published mixture modulus table (9 groups x 3 temperatures x 9
/// frequencies, magnitudes only) and mixture volumetrics.
pipeline::GroupedModuli published_mixture_moduli();
std::vector<pipeline::MixtureRecord> published_mixtures();

/// Writes mixtures.csv and mixture_moduli.csv built from the tables above.
void write_published_tables(const std::filesystem::path& dir);

}  // namespace idt::fixture
