#pragma once

#include <functional>
#include <vector>

namespace idt::numeric {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Gauss–Legendre rule with `order` points (Newton iteration on P_n).
GaussRule gauss_legendre(int order);

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

struct AdaptiveOptions {
  double abs_tolerance = 1e-15;
  double rel_tolerance = 1e-13;
  int max_depth = 40;
  int max_panels = 20000;
};

/// Adaptive Gauss–Legendre with interval bisection: a panel is accepted once
/// the single-panel estimate agrees with the sum of its two halves.
/// Throws QuadratureFailure when the panel budget is exhausted.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     int order, const AdaptiveOptions& options = {});

}  // namespace idt::numeric
