#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace idt::numeric {

/// Residual/Jacobian callback. `jacobian` is null when only residuals are needed.
using ResidualFunction =
    std::function<void(const Eigen::VectorXd& params, Eigen::VectorXd& residuals, Eigen::MatrixXd* jacobian)>;

struct LmOptions {
  double lambda_initial = 1e-3;
  double lambda_increase = 10.0;
  double lambda_decrease = 10.0;
  double lambda_max = 1e10;
  int max_iterations = 1000;
  double gradient_tolerance = 1e-14;  // on ||J^T r||_inf
  double cost_tolerance = 0.0;        // stop once cost <= this
  double relative_improvement_tolerance = 1e-15;
};

enum class LmStop {
  MaxIterations,
  GradientTolerance,
  CostTolerance,
  SmallImprovement,
  LambdaMax,
  Callback,
  Singular,
  NonFinite,
};

std::string to_string(LmStop stop);

struct LmIteration {
  int iteration = 0;
  double cost = 0.0;  // sum of squared residuals after the iteration
  double lambda = 0.0;
  bool accepted = false;
  const Eigen::VectorXd* params = nullptr;
};

/// Return false to stop the iteration (used for early stopping).
using LmCallback = std::function<bool(const LmIteration&)>;

struct LmResult {
  Eigen::VectorXd params;
  double cost = 0.0;
  int iterations = 0;
  LmStop stop = LmStop::MaxIterations;
  std::vector<double> accepted_costs;
};

/// Levenberg step: solves (J^T J + lambda I) delta = -J^T r.  Returns false
/// when the damped normal matrix is not positive definite.
bool lm_step(const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& residuals, double lambda,
             Eigen::VectorXd& delta);

/// Damped Gauss–Newton with the classic multiplicative damping schedule.
/// Rejected trial steps raise lambda and leave the parameters untouched, so
/// the cost is non-increasing over accepted steps.
LmResult levenberg_marquardt(const ResidualFunction& f, Eigen::VectorXd params, const LmOptions& options = {},
                             const LmCallback& callback = {});

}  // namespace idt::numeric
