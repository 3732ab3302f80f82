#include "idt/numeric/nnls.hpp"

#include <limits>
#include <vector>

namespace idt::numeric {
namespace {

// Unconstrained least squares restricted to the passive columns.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  const Eigen::Index n = a.cols();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < n; ++j)
    if (passive[j]) cols.push_back(j);
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(static_cast<Eigen::Index>(k));
  return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations, double tolerance) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  if (tolerance <= 0.0) {
    tolerance = 10.0 * std::numeric_limits<double>::epsilon() * a.norm() * std::max<Eigen::Index>(a.rows(), n);
  }

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = a.transpose() * (b - a * out.x);

  int iter = 0;
  while (iter < max_iterations) {
    Eigen::Index best = -1;
    double best_w = tolerance;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    passive[best] = true;

    while (true) {
      ++iter;
      Eigen::VectorXd z = solve_passive(a, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= 0.0) feasible = false;
      if (feasible) {
        out.x = z;
        break;
      }
      // Step back toward the feasible region and drop the blocking columns.
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, out.x(j) / (out.x(j) - z(j)));
      }
      out.x += alpha * (z - out.x);
      const double zero = 1e-15 * std::max(1.0, out.x.cwiseAbs().maxCoeff());
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && out.x(j) <= zero) {
          passive[j] = false;
          out.x(j) = 0.0;
        }
      }
      if (iter >= max_iterations) break;
    }
    w = a.transpose() * (b - a * out.x);
  }
  out.iterations = iter;
  out.residual_norm = (a * out.x - b).norm();
  return out;
}

}  // namespace idt::numeric
