#pragma once

// Single-hidden-layer feed-forward network (8 inputs, sigmoid hidden and
// output units) used to back-calculate the mixture elastic modulus.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

namespace idt::ann {

inline constexpr int kInputs = 8;
inline constexpr int kDefaultHidden = 10;

using InputVector = Eigen::Matrix<double, kInputs, 1>;
using WeightMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Linear map between a physical range and a network range.
struct Scaling {
  double phys_min = -1.0;
  double phys_max = 1.0;
  double net_min = -1.0;
  double net_max = 1.0;

  double to_net(double phys) const;
  double to_phys(double net) const;
  double phys_range() const { return phys_max - phys_min; }
};

struct NetworkParameters {
  WeightMatrix input_weights;     // hidden x 8, row j holds W_ij of hidden unit j
  Eigen::VectorXd output_weights;  // W_j
  Eigen::VectorXd hidden_biases;   // B_Hj
  double output_bias = 0.0;        // B_0
  std::array<Scaling, kInputs> input_scaling{};
  Scaling output_scaling{0.0, 1.0, 0.0, 1.0};

  int hidden() const { return static_cast<int>(input_weights.rows()); }
  int parameter_count() const { return hidden() * (kInputs + 2) + 1; }

  static NetworkParameters zeros(int hidden = kDefaultHidden);
  /// Throws InvalidArgument on non-finite entries, inconsistent shapes or
  /// empty scaling ranges.
  void validate() const;
};

struct FeatureVector {
  double complex_modulus = 0.0;  // MPa
  double phase_angle = 0.0;      // deg
  double vbeff_pct = 0.0;
  double va_pct = 0.0;
  double passing_half_inch_pct = 0.0;
  double passing_three_eighths_pct = 0.0;
  double passing_no4_pct = 0.0;
  double passing_no200_pct = 0.0;

  InputVector to_vector() const;
  static FeatureVector from_vector(const InputVector& v);
  void validate() const;
};

extern const std::array<const char*, kInputs> kFeatureNames;

/// 1 / (1 + exp(-t)), evaluated without overflow for any finite t.
double sigmoid(double t);

/// Output of the network for an input already in the network domain; the
/// result is the raw output-unit activation in (0, 1).
double forward_raw(const NetworkParameters& params, const InputVector& x_net);

/// Scales physical features, evaluates the network and maps the output back
/// to MPa.  Features more than 20% of their range outside the scaling range
/// add a message to `warnings` (when given) but do not fail.
double forward(const NetworkParameters& params, const FeatureVector& x, std::vector<std::string>* warnings = nullptr);

InputVector scale_inputs(const NetworkParameters& params, const FeatureVector& x);

/// d forward_raw / d x_net by the chain rule.
InputVector input_gradient(const NetworkParameters& params, const InputVector& x_net);

/// Flattened parameters, ordered W (row-major), W_j, B_Hj, B_0.
Eigen::VectorXd pack(const NetworkParameters& params);
/// Inverse of pack; shapes and scaling come from `like`.
NetworkParameters unpack(const Eigen::VectorXd& flat, const NetworkParameters& like);

/// d forward_raw / d (packed parameters) by back-propagation.
Eigen::VectorXd parameter_gradient(const NetworkParameters& params, const InputVector& x_net);

struct Example {
  FeatureVector features;
  double target = 0.0;  // MPa
};

struct SplitDataset {
  std::vector<Example> training;
  std::vector<Example> validation;
  std::vector<Example> testing;
  std::uint64_t seed = 0;
};

/// Seeded shuffle then 70/15/15 by count, rounding up for training and then
/// validation (240 -> 168/36/36, 10 -> 7/2/1).  Needs at least 10 examples.
SplitDataset split(const std::vector<Example>& data, std::uint64_t seed);

struct TrainingConfig {
  int hidden = kDefaultHidden;
  int max_iterations = 1000;
  int patience = 6;
  double lambda_initial = 1e-3;
  double lambda_factor = 10.0;
  double lambda_max = 1e10;
  double initial_weight_range = 0.5;  // uniform in [-r, r]
  /// Independent weight initializations; the one with the lowest validation
  /// MSE is kept.
  int restarts = 1;
  std::uint64_t seed = 20240101;
};

struct TrainingReport {
  std::vector<double> train_mse;       // per accepted iteration, network units
  std::vector<double> validation_mse;  // per accepted iteration, network units
  int best_iteration = 0;
  int iterations = 0;
  int best_restart = 0;
  std::string stop_reason;
  double test_mse = 0.0;  // MPa^2
  double test_r_fit = 0.0;
  double train_r_fit = 0.0;
};

struct TrainingResult {
  NetworkParameters params;
  TrainingReport report;
};

/// Levenberg–Marquardt on the mean squared error in the scaled target with
/// early stopping on the validation subset.  Scaling is computed from the
/// training subset: inputs to [-1, 1], target to [0.1, 0.9].  The report
/// histories describe the restart that was kept.
TrainingResult train(const SplitDataset& dataset, const TrainingConfig& config = {});

/// Pearson correlation between measured and predicted values.
double r_fit(const std::vector<double>& measured, const std::vector<double>& predicted);

/// Deterministic generator shared by the split and weight initialization.
/// std::mt19937_64 output is fixed by the standard; the distributions are
/// written here because the standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  std::size_t below(std::size_t n);  // [0, n)

 private:
  std::mt19937_64 engine_;
};

nlohmann::json to_json(const NetworkParameters& params);
NetworkParameters network_from_json(const nlohmann::json& j);
NetworkParameters load_network(const std::filesystem::path& path);
void save_network(const NetworkParameters& params, const std::filesystem::path& path);

}  // namespace idt::ann
