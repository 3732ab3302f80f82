#include "idt/numeric/scalar_minimize.hpp"

#include <cmath>

#include "idt/error.hpp"

namespace idt::numeric {

ScalarMinimum golden_section(const std::function<double(double)>& f, double a, double b, double tolerance,
                             int max_evaluations) {
  require(b > a, ErrorKind::InvalidArgument, "golden_section needs a < b");
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int evaluations = 2;
  while (b - a > tolerance && evaluations < max_evaluations) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    }
    ++evaluations;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), evaluations + 1};
}

ScalarMinimum scan_then_refine(const std::function<double(double)>& f, double a, double b, int samples,
                               double tolerance) {
  require(samples >= 3, ErrorKind::InvalidArgument, "scan needs at least 3 samples");
  const double h = (b - a) / (samples - 1);
  int best = 0;
  double best_value = f(a);
  for (int i = 1; i < samples; ++i) {
    const double v = f(a + i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = a + std::max(0, best - 1) * h;
  const double hi = a + std::min(samples - 1, best + 1) * h;
  ScalarMinimum refined = golden_section(f, lo, hi, tolerance);
  refined.evaluations += samples;
  if (best_value < refined.value) return {a + best * h, best_value, refined.evaluations};
  return refined;
}

}  // namespace idt::numeric
