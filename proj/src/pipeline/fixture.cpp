#include "idt/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "idt/error.hpp"

namespace idt::fixture {
namespace {

// Synthetic binder spectra have realistic moduli but low phase angles at the
// reference temperature, so the training features extend the phase range.
constexpr std::array<double, ann::kInputs> kTrainingMin = {0.0, 5.0, 4.5, 3.9, 87.2, 73.7, 48.2, 3.1};

material::PronySeries gaussian_spectrum(double instantaneous, double centre_log_tau, double width_decades,
                                        double long_term_fraction) {
  material::PronySeries s;
  s.instantaneous_modulus = instantaneous;
  std::vector<double> weights;
  std::vector<double> taus;
  double total = 0.0;
  for (double lt = -8.0; lt <= 4.0 + 1e-9; lt += 0.25) {
    const double z = (lt - centre_log_tau) / width_decades;
    const double w = std::exp(-0.5 * z * z);
    if (w < 1e-9) continue;
    weights.push_back(w);
    taus.push_back(std::pow(10.0, lt));
    total += w;
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    s.terms.push_back({(1.0 - long_term_fraction) * weights[i] / total, taus[i]});
  }
  s.long_term_modulus = instantaneous * (1.0 - s.sum_g());
  s.validate();
  return s;
}

}  // namespace

const std::array<double, ann::kInputs> kFeatureMin = {0.0, 28.2, 4.5, 3.9, 87.2, 73.7, 48.2, 3.1};
const std::array<double, ann::kInputs> kFeatureMax = {1065.6, 79.2, 5.6, 4.1, 96.4, 87.3, 63.8, 6.2};

ann::NetworkParameters hidden_network(std::uint64_t seed) {
  ann::Rng g(seed);
  auto net = ann::NetworkParameters::zeros(ann::kDefaultHidden);
  // Draws whose output barely varies over the input box are redrawn: their
  // targets would be indistinguishable from noise.
  constexpr int kProbes = 256;
  constexpr double kMinOutputStd = 0.1;
  while (true) {
    for (int j = 0; j < net.hidden(); ++j) {
      for (int i = 0; i < ann::kInputs; ++i) net.input_weights(j, i) = g.uniform(-1.5, 1.5);
      net.output_weights(j) = g.uniform(-2.0, 2.0);
      net.hidden_biases(j) = g.uniform(-1.0, 1.0);
    }
    net.output_bias = g.uniform(-0.5, 0.5);
    ann::Rng probe(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < kProbes; ++k) {
      ann::InputVector x;
      for (int i = 0; i < ann::kInputs; ++i) x[i] = probe.uniform(-1.0, 1.0);
      const double y = ann::forward_raw(net, x);
      sum += y;
      sum_sq += y * y;
    }
    const double mean = sum / kProbes;
    if (std::sqrt(std::max(0.0, sum_sq / kProbes - mean * mean)) >= kMinOutputStd) break;
  }
  for (std::size_t i = 0; i < ann::kInputs; ++i) net.input_scaling[i] = {kFeatureMin[i], kFeatureMax[i], -1.0, 1.0};
  net.output_scaling = {1000.0, 30000.0, 0.0, 1.0};
  return net;
}

std::vector<ann::Example> sample_dataset(const ann::NetworkParameters& net, std::size_t count, double noise,
                                         std::uint64_t seed, const std::array<double, ann::kInputs>& min,
                                         const std::array<double, ann::kInputs>& max) {
  ann::Rng r(seed);
  std::vector<ann::Example> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    ann::InputVector v;
    for (int i = 0; i < ann::kInputs; ++i) v[i] = r.uniform(min[static_cast<std::size_t>(i)], max[static_cast<std::size_t>(i)]);
    const auto f = ann::FeatureVector::from_vector(v);
    double target = ann::forward(net, f);
    // Uniform on [-sqrt(3), sqrt(3)] has unit variance.
    target *= 1.0 + noise * (2.0 * r.uniform() - 1.0) * std::sqrt(3.0);
    out.push_back({f, target});
  }
  return out;
}

SyntheticProject write_synthetic_project(const std::filesystem::path& dir, const SyntheticOptions& options) {
  require(options.groups >= 1, ErrorKind::InvalidArgument, "need at least one group");
  require(!options.frequencies.empty() && !options.temperatures.empty(), ErrorKind::InvalidArgument,
          "need test temperatures and frequencies");
  std::filesystem::create_directories(dir);
  const double ts = 17.1;
  ann::Rng rng(options.seed);
  SyntheticProject project;
  project.network = hidden_network();
  const double feature_frequency = *std::max_element(options.frequencies.begin(), options.frequencies.end());

  pipeline::GroupedModuli binder_records;
  pipeline::GroupedModuli mixture_records;
  std::vector<pipeline::MixtureRecord> mixtures;

  for (int k = 0; k < options.groups; ++k) {
    SyntheticGroup g;
    g.name = "S" + std::to_string(k + 1);
    const double centre = -1.6 + 0.4 * (k % 3) + rng.uniform(-0.1, 0.1);
    g.binder = gaussian_spectrum(rng.uniform(700.0, 1000.0), centre, 1.0, 0.02);
    material::WlfParameters wlf{rng.uniform(-13.0, -11.0), rng.uniform(100.0, 120.0), ts};

    pipeline::MixtureRecord m;
    m.group = g.name;
    m.rap_pct = rng.uniform(10.0, 45.0);
    m.ac_pct = rng.uniform(4.5, 5.6);
    m.vma_pct = rng.uniform(12.5, 14.5);
    m.vfa_pct = rng.uniform(68.0, 72.5);
    m.gmb = 2.315;
    m.gmm = rng.uniform(2.40, 2.64);

    const double omega = 2.0 * std::numbers::pi * feature_frequency;
    ann::FeatureVector f;
    f.complex_modulus = g.binder.magnitude(omega);
    f.phase_angle = g.binder.phase(omega) * 180.0 / std::numbers::pi;
    double e0 = 0.0;
    for (int attempt = 0;; ++attempt) {
      require(attempt < 10000, ErrorKind::FitFailure, "could not draw mixture features with a plausible modulus");
      f.vbeff_pct = rng.uniform(kFeatureMin[2], kFeatureMax[2]);
      f.va_pct = rng.uniform(kFeatureMin[3], kFeatureMax[3]);
      f.passing_half_inch_pct = rng.uniform(kFeatureMin[4], kFeatureMax[4]);
      f.passing_three_eighths_pct = rng.uniform(kFeatureMin[5], kFeatureMax[5]);
      f.passing_no4_pct = rng.uniform(kFeatureMin[6], kFeatureMax[6]);
      f.passing_no200_pct = rng.uniform(kFeatureMin[7], kFeatureMax[7]);
      e0 = ann::forward(project.network, f);
      if (e0 >= 8000.0 && e0 <= 25000.0) break;
    }
    m.vbeff_pct = f.vbeff_pct;
    m.va_pct = f.va_pct;
    m.passing_half_inch_pct = f.passing_half_inch_pct;
    m.passing_three_eighths_pct = f.passing_three_eighths_pct;
    m.passing_no4_pct = f.passing_no4_pct;
    m.passing_no200_pct = f.passing_no200_pct;
    g.mixture = m;
    mixtures.push_back(m);

    g.material.instantaneous_youngs_modulus = e0;
    g.material.poissons_ratio = 0.25;
    g.material.shear_prony = g.binder;
    g.material.wlf = wlf;
    g.material.validate();

    for (double t : options.temperatures) {
      const double shift = std::pow(10.0, material::wlf_shift(wlf, t));
      for (double freq : options.binder_frequencies) {
        const double w = 2.0 * std::numbers::pi * freq * shift;
        binder_records[g.name].push_back(
            {t, freq, g.binder.magnitude(w), g.binder.phase(w) * 180.0 / std::numbers::pi});
      }
      for (double freq : options.frequencies) {
        const auto e = fe::proportional_complex_modulus(g.material, freq, t);
        mixture_records[g.name].push_back({t, freq, std::abs(e), std::arg(e) * 180.0 / std::numbers::pi});
      }
    }
    project.groups.push_back(g);
  }

  auto training_min = kTrainingMin;
  auto training = sample_dataset(project.network, options.training_examples, 0.0, options.seed + 1, training_min,
                                 kFeatureMax);
  pipeline::write_mixtures(mixtures, dir / "mixtures.csv");
  pipeline::write_grouped_moduli(binder_records, dir / "binder.csv");
  pipeline::write_grouped_moduli(mixture_records, dir / "mixture_moduli.csv");
  pipeline::write_training_data(training, dir / "ann_training.csv");

  nlohmann::json config = {
      {"reference_temperature_C", ts},
      {"temperatures_C", options.temperatures},
      {"frequencies_Hz", options.frequencies},
      {"poissons_ratio", 0.25},
      {"solver", {{"steps_per_cycle", 64}, {"n_cycles", 10}, {"mesh_size_mm", options.mesh_size}}},
      {"prony", {{"terms_per_decade", 10}}},
      {"ann", {{"training_data", "ann_training.csv"}, {"restarts", 6}, {"patience", 6}}},
      {"seed", pipeline::kDefaultSeed},
      {"inputs", {{"mixtures", "mixtures.csv"}, {"binder", "binder.csv"}, {"mixture_moduli", "mixture_moduli.csv"}}},
      {"output_dir", "out"}};
  project.config = dir / "config.json";
  std::ofstream(project.config) << config.dump(2) << '\n';
  return project;
}

pipeline::GroupedModuli published_mixture_moduli() {
  static constexpr double kFrequencies[9] = {25, 20, 10, 5, 2, 1, 0.5, 0.2, 0.1};
  static constexpr double kTemperatures[3] = {0.4, 17.1, 33.8};
  // Rows: group-major, then temperature.
  static constexpr double kModuli[27][9] = {
      {20425, 20252, 22008, 18619, 17501, 16210, 14836, 13512, 11995},
      {12573, 12510, 11315, 9360, 7537, 6399, 5081, 3928, 3104},
      {4798, 4718, 3462, 2495, 1680, 1193, 1000, 656, 502},
      {14822, 17293, 18841, 17532, 15858, 14445, 13132, 11527, 10191},
      {9768, 9528, 8905, 7362, 5751, 4768, 3934, 2958, 2386},
      {3157, 2629, 2077, 1691, 1203, 982, 779, 631, 593},
      {20128, 19719, 19727, 18427, 16927, 15917, 14710, 13495, 12285},
      {15137, 15679, 14442, 12439, 10730, 9330, 7999, 6584, 5652},
      {5769, 5424, 4419, 3379, 2353, 1813, 1394, 1010, 832},
      {21585, 20264, 19523, 18049, 16166, 14767, 13283, 11639, 10277},
      {13191, 12485, 11481, 10044, 7754, 6457, 5244, 4008, 3281},
      {5083, 4877, 3591, 2718, 1897, 1443, 1145, 820, 664},
      {22738, 16279, 16353, 14882, 13157, 11970, 10627, 9074, 7931},
      {9634, 8889, 7820, 6369, 4802, 3875, 3032, 2244, 1638},
      {3172, 2882, 2180, 1621, 1183, 1005, 950, 750, 607},
      {22324, 23397, 21829, 20659, 18753, 17531, 16515, 14680, 13266},
      {14264, 13526, 13312, 11314, 8720, 7472, 6167, 4887, 3921},
      {5512, 5241, 4146, 3028, 1995, 1520, 1138, 766, 557},
      {26413, 22774, 22624, 21734, 20130, 18938, 17544, 15723, 14373},
      {13950, 13122, 12836, 10514, 8153, 6782, 5470, 4310, 3459},
      {4486, 4161, 3377, 2440, 1658, 1256, 976, 710, 519},
      {24299, 22946, 22938, 21377, 20027, 18331, 16929, 15092, 13813},
      {12588, 12151, 10727, 8796, 7034, 5822, 4758, 3653, 2935},
      {4627, 4006, 3347, 2695, 1906, 4886, 1320, 1171, 1061},
      {20954, 19559, 20433, 18470, 16892, 15498, 14046, 12499, 11149},
      {11719, 11584, 10429, 8377, 6339, 5194, 4020, 2965, 2147},
      {4832, 4195, 3067, 2171, 1539, 1198, 919, 614, 468}};
  pipeline::GroupedModuli out;
  for (int row = 0; row < 27; ++row) {
    const std::string group = std::to_string(row / 3 + 1);
    for (int c = 0; c < 9; ++c) {
      out[group].push_back({kTemperatures[row % 3], kFrequencies[c], kModuli[row][c], std::nullopt});
    }
  }
  return out;
}

std::vector<pipeline::MixtureRecord> published_mixtures() {
  static constexpr double kRap[9] = {23.8, 23.3, 37.2, 26.2, 23.8, 36.4, 23.3, 11.4, 45.3};
  static constexpr double kAc[9] = {4.5, 5.2, 5.6, 4.8, 4.8, 4.9, 5.6, 5.3, 5.0};
  static constexpr double kVbeff[9] = {4.2, 4.1, 4.1, 3.9, 3.5, 4.3, 4.2, 4.0, 4.6};
  static constexpr double kVma[9] = {13.5, 13.5, 13.6, 13.1, 12.5, 13.9, 13.7, 13.4, 14.4};
  static constexpr double kVfa[9] = {70.3, 70.4, 70.6, 69.6, 68.1, 71.2, 70.8, 70.2, 72.3};
  static constexpr double kGmm[9] = {2.406, 2.458, 2.510, 2.479, 2.635, 2.458, 2.479, 2.510, 2.437};
  static constexpr double kVa[9] = {4.010, 3.996, 3.998, 3.982, 3.988, 4.003, 4.000, 3.993, 3.989};
  std::vector<pipeline::MixtureRecord> out;
  for (int i = 0; i < 9; ++i) {
    pipeline::MixtureRecord m;
    m.group = std::to_string(i + 1);
    m.rap_pct = kRap[i];
    m.ac_pct = kAc[i];
    m.vbeff_pct = kVbeff[i];
    m.vma_pct = kVma[i];
    m.vfa_pct = kVfa[i];
    m.gmb = 2.315;
    m.gmm = kGmm[i];
    m.va_pct = kVa[i];
    m.validate();
    out.push_back(m);
  }
  return out;
}

void write_published_tables(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  pipeline::write_mixtures(published_mixtures(), dir / "mixtures.csv");
  pipeline::write_grouped_moduli(published_mixture_moduli(), dir / "mixture_moduli.csv");
}

}  // namespace idt::fixture
