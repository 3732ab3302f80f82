#include <cmath>
#include <string>

#include "idt/ann.hpp"
#include "idt/error.hpp"
#include "idt/simd/kernels.hpp"

namespace idt::ann {

const std::array<const char*, kInputs> kFeatureNames = {
    "complex_modulus_MPa",   "phase_angle_deg",           "vbeff_pct",       "va_pct",
    "passing_half_inch_pct", "passing_three_eighths_pct", "passing_no4_pct", "passing_no200_pct"};

double Scaling::to_net(double phys) const {
  return net_min + (phys - phys_min) * (net_max - net_min) / (phys_max - phys_min);
}

double Scaling::to_phys(double net) const {
  return phys_min + (net - net_min) * (phys_max - phys_min) / (net_max - net_min);
}

NetworkParameters NetworkParameters::zeros(int hidden) {
  require(hidden >= 1, ErrorKind::InvalidArgument, "hidden layer needs at least one unit");
  NetworkParameters p;
  p.input_weights = WeightMatrix::Zero(hidden, kInputs);
  p.output_weights = Eigen::VectorXd::Zero(hidden);
  p.hidden_biases = Eigen::VectorXd::Zero(hidden);
  return p;
}

void NetworkParameters::validate() const {
  require(input_weights.rows() >= 1 && input_weights.cols() == kInputs, ErrorKind::InvalidArgument,
          "input weights must be hidden x 8");
  require(output_weights.size() == input_weights.rows() && hidden_biases.size() == input_weights.rows(),
          ErrorKind::InvalidArgument, "output weights and hidden biases must have one entry per hidden unit");
  require(input_weights.allFinite() && output_weights.allFinite() && hidden_biases.allFinite() &&
              std::isfinite(output_bias),
          ErrorKind::InvalidArgument, "network parameters must be finite");
  auto check = [](const Scaling& s, const std::string& what) {
    require(std::isfinite(s.phys_min) && std::isfinite(s.phys_max) && s.phys_min < s.phys_max,
            ErrorKind::InvalidArgument, what + ": physical scaling range is empty");
    require(std::isfinite(s.net_min) && std::isfinite(s.net_max) && s.net_min < s.net_max,
            ErrorKind::InvalidArgument, what + ": network scaling range is empty");
  };
  for (int i = 0; i < kInputs; ++i) check(input_scaling[static_cast<std::size_t>(i)], kFeatureNames[static_cast<std::size_t>(i)]);
  check(output_scaling, "output");
}

InputVector FeatureVector::to_vector() const {
  InputVector v;
  v << complex_modulus, phase_angle, vbeff_pct, va_pct, passing_half_inch_pct, passing_three_eighths_pct,
      passing_no4_pct, passing_no200_pct;
  return v;
}

FeatureVector FeatureVector::from_vector(const InputVector& v) {
  return {v(0), v(1), v(2), v(3), v(4), v(5), v(6), v(7)};
}

void FeatureVector::validate() const {
  require(complex_modulus >= 0.0, ErrorKind::InvalidArgument, "complex modulus must be non-negative");
  require(phase_angle >= 0.0 && phase_angle <= 90.0, ErrorKind::InvalidArgument, "phase angle must lie in [0, 90]");
  const InputVector v = to_vector();
  for (int i = 2; i < kInputs; ++i) {
    require(v(i) >= 0.0 && v(i) <= 100.0, ErrorKind::InvalidArgument,
            std::string(kFeatureNames[static_cast<std::size_t>(i)]) + " must lie in [0, 100]");
  }
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

// Hidden activations v_j = f1(B_Hj + sum_i W_ij x_i).
Eigen::VectorXd hidden_activations(const NetworkParameters& p, const InputVector& x) {
  const auto& k = simd::active();
  const int h = p.hidden();
  Eigen::VectorXd v(h);
  for (int j = 0; j < h; ++j) v(j) = sigmoid(p.hidden_biases(j) + k.dot(p.input_weights.row(j).data(), x.data(), kInputs));
  return v;
}

}  // namespace

double forward_raw(const NetworkParameters& params, const InputVector& x_net) {
  const Eigen::VectorXd v = hidden_activations(params, x_net);
  const double s = params.output_bias + simd::active().dot(params.output_weights.data(), v.data(), v.size());
  return sigmoid(s);
}

InputVector scale_inputs(const NetworkParameters& params, const FeatureVector& x) {
  const InputVector phys = x.to_vector();
  InputVector net;
  for (int i = 0; i < kInputs; ++i) net(i) = params.input_scaling[static_cast<std::size_t>(i)].to_net(phys(i));
  return net;
}

double forward(const NetworkParameters& params, const FeatureVector& x, std::vector<std::string>* warnings) {
  x.validate();
  if (warnings) {
    const InputVector phys = x.to_vector();
    for (int i = 0; i < kInputs; ++i) {
      const Scaling& s = params.input_scaling[static_cast<std::size_t>(i)];
      const double margin = 0.2 * s.phys_range();
      if (phys(i) < s.phys_min - margin || phys(i) > s.phys_max + margin) {
        warnings->push_back(std::string("extrapolation: ") + kFeatureNames[static_cast<std::size_t>(i)] + " = " +
                            std::to_string(phys(i)) + " is outside [" + std::to_string(s.phys_min) + ", " +
                            std::to_string(s.phys_max) + "] by more than 20% of the range");
      }
    }
  }
  return params.output_scaling.to_phys(forward_raw(params, scale_inputs(params, x)));
}

InputVector input_gradient(const NetworkParameters& params, const InputVector& x_net) {
  const Eigen::VectorXd v = hidden_activations(params, x_net);
  const double y = sigmoid(params.output_bias + params.output_weights.dot(v));
  const double dy = y * (1.0 - y);
  InputVector g = InputVector::Zero();
  for (int j = 0; j < params.hidden(); ++j) {
    const double back = dy * params.output_weights(j) * v(j) * (1.0 - v(j));
    g += back * params.input_weights.row(j).transpose();
  }
  return g;
}

Eigen::VectorXd pack(const NetworkParameters& params) {
  const int h = params.hidden();
  Eigen::VectorXd flat(params.parameter_count());
  int k = 0;
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < kInputs; ++i) flat(k++) = params.input_weights(j, i);
  for (int j = 0; j < h; ++j) flat(k++) = params.output_weights(j);
  for (int j = 0; j < h; ++j) flat(k++) = params.hidden_biases(j);
  flat(k) = params.output_bias;
  return flat;
}

NetworkParameters unpack(const Eigen::VectorXd& flat, const NetworkParameters& like) {
  require(flat.size() == like.parameter_count(), ErrorKind::InvalidArgument, "parameter vector has the wrong length");
  NetworkParameters p = like;
  const int h = like.hidden();
  int k = 0;
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < kInputs; ++i) p.input_weights(j, i) = flat(k++);
  for (int j = 0; j < h; ++j) p.output_weights(j) = flat(k++);
  for (int j = 0; j < h; ++j) p.hidden_biases(j) = flat(k++);
  p.output_bias = flat(k);
  return p;
}

Eigen::VectorXd parameter_gradient(const NetworkParameters& params, const InputVector& x_net) {
  const int h = params.hidden();
  const Eigen::VectorXd v = hidden_activations(params, x_net);
  const double y = sigmoid(params.output_bias + params.output_weights.dot(v));
  const double dy = y * (1.0 - y);
  Eigen::VectorXd g(params.parameter_count());
  const int out_w = h * kInputs;
  const int hid_b = out_w + h;
  for (int j = 0; j < h; ++j) {
    const double back = dy * params.output_weights(j) * v(j) * (1.0 - v(j));
    for (int i = 0; i < kInputs; ++i) g(j * kInputs + i) = back * x_net(i);
    g(out_w + j) = dy * v(j);
    g(hid_b + j) = back;
  }
  g(hid_b + h) = dy;
  return g;
}

double r_fit(const std::vector<double>& measured, const std::vector<double>& predicted) {
  require(measured.size() == predicted.size(), ErrorKind::InvalidArgument, "r_fit inputs differ in length");
  require(measured.size() >= 2, ErrorKind::InsufficientData, "r_fit needs at least 2 pairs");
  const double n = static_cast<double>(measured.size());
  // Centred sums; algebraically identical to the raw-moment formula but
  // without its cancellation.
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    mx += measured[i];
    my += predicted[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const double dx = measured[i] - mx;
    const double dy = predicted[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double scale_x = std::max(std::abs(mx), 1.0);
  const double scale_y = std::max(std::abs(my), 1.0);
  if (!(sxx > 1e-26 * n * scale_x * scale_x) || !(syy > 1e-26 * n * scale_y * scale_y)) {
    fail(ErrorKind::UndefinedCorrelation, "r_fit is undefined for zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace idt::ann
