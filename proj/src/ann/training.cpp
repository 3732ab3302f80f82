#include <algorithm>
#include <cmath>
#include <limits>

#include "idt/ann.hpp"
#include "idt/error.hpp"
#include "idt/numeric/levenberg_marquardt.hpp"

namespace idt::ann {
namespace {

constexpr double kTargetLow = 0.1;
constexpr double kTargetHigh = 0.9;

Scaling range_scaling(double lo, double hi, double net_lo, double net_hi) {
  if (!(hi > lo)) {
    // A constant column maps to the middle of the network range.
    const double pad = 0.5 * std::max(std::abs(lo), 1.0);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, net_lo, net_hi};
}

struct Scaled {
  std::vector<InputVector> x;
  std::vector<double> t;
};

Scaled scale(const NetworkParameters& p, const std::vector<Example>& examples) {
  Scaled s;
  for (const auto& e : examples) {
    s.x.push_back(scale_inputs(p, e.features));
    s.t.push_back(p.output_scaling.to_net(e.target));
  }
  return s;
}

double mse(const NetworkParameters& p, const Scaled& s) {
  if (s.x.empty()) return 0.0;
  double sse = 0.0;
  for (std::size_t n = 0; n < s.x.size(); ++n) {
    const double r = forward_raw(p, s.x[n]) - s.t[n];
    sse += r * r;
  }
  return sse / static_cast<double>(s.x.size());
}

}  // namespace

TrainingResult train(const SplitDataset& dataset, const TrainingConfig& config) {
  require(!dataset.training.empty(), ErrorKind::InsufficientData, "training set is empty");
  require(config.hidden >= 1, ErrorKind::InvalidArgument, "hidden layer needs at least one unit");
  for (const auto* subset : {&dataset.training, &dataset.validation, &dataset.testing}) {
    for (const auto& e : *subset) {
      e.features.validate();
      require(e.target > 0.0 && std::isfinite(e.target), ErrorKind::InvalidArgument, "targets must be positive");
    }
  }

  NetworkParameters params = NetworkParameters::zeros(config.hidden);
  for (int i = 0; i < kInputs; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& e : dataset.training) {
      const double v = e.features.to_vector()(i);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    params.input_scaling[static_cast<std::size_t>(i)] = range_scaling(lo, hi, -1.0, 1.0);
  }
  {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& e : dataset.training) {
      lo = std::min(lo, e.target);
      hi = std::max(hi, e.target);
    }
    params.output_scaling = range_scaling(lo, hi, kTargetLow, kTargetHigh);
  }

  const Scaled train_set = scale(params, dataset.training);
  const Scaled val_set = scale(params, dataset.validation);
  const auto n_train = static_cast<Eigen::Index>(train_set.x.size());

  numeric::ResidualFunction residuals = [&](const Eigen::VectorXd& w, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const NetworkParameters p = unpack(w, params);
    r.resize(n_train);
    if (jac) jac->resize(n_train, w.size());
    for (Eigen::Index n = 0; n < n_train; ++n) {
      const auto& x = train_set.x[static_cast<std::size_t>(n)];
      r(n) = forward_raw(p, x) - train_set.t[static_cast<std::size_t>(n)];
      if (jac) jac->row(n) = parameter_gradient(p, x).transpose();
    }
  };

  numeric::LmOptions options;
  options.lambda_initial = config.lambda_initial;
  options.lambda_increase = config.lambda_factor;
  options.lambda_decrease = config.lambda_factor;
  options.lambda_max = config.lambda_max;
  options.max_iterations = config.max_iterations;
  options.gradient_tolerance = 1e-14;

  Rng rng(config.seed);
  Eigen::VectorXd kept;
  TrainingReport report;
  double kept_score = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < std::max(1, config.restarts); ++restart) {
    Eigen::VectorXd flat(params.parameter_count());
    for (Eigen::Index k = 0; k < flat.size(); ++k) {
      flat(k) = rng.uniform(-config.initial_weight_range, config.initial_weight_range);
    }

    TrainingReport attempt;
    Eigen::VectorXd best = flat;
    double best_val = val_set.x.empty() ? 0.0 : mse(unpack(flat, params), val_set);
    int stall = 0;
    numeric::LmCallback early_stop = [&](const numeric::LmIteration& it) {
      attempt.train_mse.push_back(it.cost / static_cast<double>(n_train));
      if (val_set.x.empty()) {
        best = *it.params;
        attempt.best_iteration = it.iteration;
        return true;
      }
      const double val_mse = mse(unpack(*it.params, params), val_set);
      attempt.validation_mse.push_back(val_mse);
      if (val_mse < best_val) {
        best_val = val_mse;
        best = *it.params;
        attempt.best_iteration = it.iteration;
        stall = 0;
        return true;
      }
      return ++stall < config.patience;
    };

    const numeric::LmResult lm = numeric::levenberg_marquardt(residuals, flat, options, early_stop);
    if (lm.stop == numeric::LmStop::NonFinite) fail(ErrorKind::Divergence, "training loss became non-finite");
    if (lm.stop == numeric::LmStop::Singular) {
      fail(ErrorKind::TrainingFailure, "normal equations stayed singular at maximum damping");
    }
    if (attempt.train_mse.empty()) best = lm.params;
    attempt.iterations = lm.iterations;
    attempt.best_restart = restart;
    attempt.stop_reason = lm.stop == numeric::LmStop::Callback ? "early-stopping" : numeric::to_string(lm.stop);

    const NetworkParameters candidate = unpack(best, params);
    const double score = val_set.x.empty() ? mse(candidate, train_set) : mse(candidate, val_set);
    if (score < kept_score) {
      kept_score = score;
      kept = best;
      report = std::move(attempt);
    }
  }

  TrainingResult result{unpack(kept, params), std::move(report)};
  auto evaluate = [&](const std::vector<Example>& subset, double* mse_out) {
    std::vector<double> measured;
    std::vector<double> predicted;
    double sse = 0.0;
    for (const auto& e : subset) {
      measured.push_back(e.target);
      predicted.push_back(forward(result.params, e.features));
      sse += (predicted.back() - e.target) * (predicted.back() - e.target);
    }
    if (mse_out) *mse_out = subset.empty() ? 0.0 : sse / static_cast<double>(subset.size());
    try {
      return r_fit(measured, predicted);
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();  // constant targets or fewer than 2 points
    }
  };
  result.report.test_r_fit = evaluate(dataset.testing, &result.report.test_mse);
  result.report.train_r_fit = evaluate(dataset.training, nullptr);
  return result;
}

}  // namespace idt::ann
