#pragma once

#include <functional>

namespace idt::numeric {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of a unimodal function on [a, b].
ScalarMinimum golden_section(const std::function<double(double)>& f, double a, double b, double tolerance = 1e-10,
                             int max_evaluations = 500);

/// Scans `samples` equally spaced points on [a, b], then refines the best
/// bracket by golden-section search.  Suited to functions that are not known
/// to be unimodal over the whole interval.
ScalarMinimum scan_then_refine(const std::function<double(double)>& f, double a, double b, int samples,
                               double tolerance = 1e-10);

}  // namespace idt::numeric
