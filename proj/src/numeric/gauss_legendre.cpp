#include "idt/numeric/gauss_legendre.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "idt/error.hpp"

namespace idt::numeric {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence (n >= 2).
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussRule gauss_legendre(int order) {
  require(order >= 1, ErrorKind::InvalidArgument, "Gauss-Legendre order must be positive");
  GaussRule rule;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

namespace {

double apply_rule(const GaussRule& rule, const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     int order, const AdaptiveOptions& options) {
  IntegrationResult out;
  if (a == b) return out;
  const GaussRule rule = gauss_legendre(order);

  struct Panel {
    double lo, hi, estimate;
    int depth;
  };
  std::vector<Panel> stack;
  stack.push_back({a, b, apply_rule(rule, f, a, b), 0});
  const double total_width = std::abs(b - a);

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const double left = apply_rule(rule, f, p.lo, mid);
    const double right = apply_rule(rule, f, mid, p.hi);
    const double refined = left + right;
    const double diff = std::abs(refined - p.estimate);
    const double share = std::abs(p.hi - p.lo) / total_width;
    const double tol = std::max(options.abs_tolerance * share, options.rel_tolerance * std::abs(refined));
    if (diff <= tol) {
      out.value += refined;
      out.error_estimate += diff;
      ++out.panels;
      continue;
    }
    if (p.depth >= options.max_depth ||
        static_cast<int>(stack.size()) + out.panels >= options.max_panels) {
      fail(ErrorKind::QuadratureFailure, "adaptive refinement did not converge");
    }
    stack.push_back({mid, p.hi, right, p.depth + 1});
    stack.push_back({p.lo, mid, left, p.depth + 1});
  }
  return out;
}

}  // namespace idt::numeric
