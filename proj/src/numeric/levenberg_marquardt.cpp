#include "idt/numeric/levenberg_marquardt.hpp"

#include <cmath>

namespace idt::numeric {

std::string to_string(LmStop stop) {
  switch (stop) {
    case LmStop::MaxIterations: return "max-iterations";
    case LmStop::GradientTolerance: return "gradient-tolerance";
    case LmStop::CostTolerance: return "cost-tolerance";
    case LmStop::SmallImprovement: return "small-improvement";
    case LmStop::LambdaMax: return "lambda-max";
    case LmStop::Callback: return "callback";
    case LmStop::Singular: return "singular";
    case LmStop::NonFinite: return "non-finite";
  }
  return "unknown";
}

bool lm_step(const Eigen::MatrixXd& jacobian, const Eigen::VectorXd& residuals, double lambda,
             Eigen::VectorXd& delta) {
  Eigen::MatrixXd normal = jacobian.transpose() * jacobian;
  normal.diagonal().array() += lambda;
  const Eigen::VectorXd rhs = -(jacobian.transpose() * residuals);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  delta = ldlt.solve(rhs);
  return delta.allFinite();
}

LmResult levenberg_marquardt(const ResidualFunction& f, Eigen::VectorXd params, const LmOptions& options,
                             const LmCallback& callback) {
  LmResult result;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  f(params, r, &jac);
  double cost = r.squaredNorm();
  if (!std::isfinite(cost)) {
    result.params = params;
    result.cost = cost;
    result.stop = LmStop::NonFinite;
    return result;
  }
  result.accepted_costs.push_back(cost);
  double lambda = options.lambda_initial;

  Eigen::VectorXd delta;
  Eigen::VectorXd trial_r;
  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    if (cost <= options.cost_tolerance) {
      result.stop = LmStop::CostTolerance;
      break;
    }
    const double gradient = (jac.transpose() * r).cwiseAbs().maxCoeff();
    if (gradient <= options.gradient_tolerance) {
      result.stop = LmStop::GradientTolerance;
      break;
    }

    bool accepted = false;
    bool singular = true;
    while (lambda <= options.lambda_max) {
      if (!lm_step(jac, r, lambda, delta)) {
        lambda *= options.lambda_increase;
        continue;
      }
      singular = false;
      const Eigen::VectorXd trial = params + delta;
      f(trial, trial_r, nullptr);
      const double trial_cost = trial_r.squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        const double improvement = (cost - trial_cost) / std::max(cost, 1e-300);
        params = trial;
        cost = trial_cost;
        lambda = std::max(lambda / options.lambda_decrease, 1e-300);
        accepted = true;
        f(params, r, &jac);
        result.accepted_costs.push_back(cost);
        if (improvement < options.relative_improvement_tolerance) {
          result.stop = LmStop::SmallImprovement;
        }
        break;
      }
      lambda *= options.lambda_increase;
    }

    if (!accepted) {
      result.stop = singular ? LmStop::Singular : LmStop::LambdaMax;
      break;
    }
    if (callback) {
      LmIteration info{iteration + 1, cost, lambda, true, &params};
      if (!callback(info)) {
        result.stop = LmStop::Callback;
        ++iteration;
        break;
      }
    }
    if (result.stop == LmStop::SmallImprovement) {
      ++iteration;
      break;
    }
  }
  result.params = params;
  result.cost = cost;
  result.iterations = iteration;
  return result;
}

}  // namespace idt::numeric
