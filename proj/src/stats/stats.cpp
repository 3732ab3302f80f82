#include "idt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "idt/ann.hpp"
#include "idt/error.hpp"

namespace idt::stats {
namespace {

void check_pairs(const std::vector<PredictionPair>& pairs) {
  require(!pairs.empty(), ErrorKind::InsufficientData, "no prediction pairs");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    require(pairs[i].measured > 0.0 && std::isfinite(pairs[i].measured) && std::isfinite(pairs[i].predicted),
            ErrorKind::InvalidArgument, "pair " + std::to_string(i) + " needs a positive measured value");
  }
}

double relative_error(const PredictionPair& p) { return std::abs(p.measured - p.predicted) / p.measured; }

}  // namespace

Summary summarize(const std::vector<double>& values) {
  require(!values.empty(), ErrorKind::InsufficientData, "no values to summarize");
  Summary s;
  s.count = values.size();
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

Residuals residuals(const std::vector<PredictionPair>& pairs) {
  check_pairs(pairs);
  Residuals r;
  r.values.reserve(pairs.size());
  for (const auto& p : pairs) r.values.push_back(p.measured - p.predicted);
  r.summary = summarize(r.values);
  return r;
}

AccuracyCurve accuracy_curve(const std::vector<PredictionPair>& pairs, const std::vector<double>& tolerances,
                             ToleranceMode mode) {
  check_pairs(pairs);
  require(!tolerances.empty(), ErrorKind::InvalidArgument, "no tolerances given");
  for (std::size_t i = 0; i < tolerances.size(); ++i) {
    require(tolerances[i] > 0.0 && std::isfinite(tolerances[i]), ErrorKind::InvalidArgument,
            "tolerances must be positive");
    require(i == 0 || tolerances[i] > tolerances[i - 1], ErrorKind::InvalidArgument,
            "tolerances must be strictly increasing");
  }
  std::vector<double> errors;
  errors.reserve(pairs.size());
  for (const auto& p : pairs) {
    errors.push_back(mode == ToleranceMode::Relative ? relative_error(p) : std::abs(p.measured - p.predicted));
  }
  std::sort(errors.begin(), errors.end());
  AccuracyCurve curve;
  for (double tol : tolerances) {
    const auto within = std::upper_bound(errors.begin(), errors.end(), tol) - errors.begin();
    curve.points.push_back({tol, static_cast<double>(within) / static_cast<double>(errors.size())});
  }
  return curve;
}

std::vector<double> default_tolerances() {
  std::vector<double> t;
  for (int i = 1; i <= 100; ++i) t.push_back(i / 100.0);
  return t;
}

RelativeErrorReport relative_error_report(const std::vector<PredictionPair>& pairs, double threshold) {
  check_pairs(pairs);
  require(threshold > 0.0, ErrorKind::InvalidArgument, "threshold must be positive");
  std::map<std::string, GroupError> by_group;
  RelativeErrorReport report;
  report.threshold = threshold;
  double sum = 0.0;
  for (const auto& p : pairs) {
    const double e = relative_error(p);
    auto& g = by_group[p.group];
    g.group = p.group;
    ++g.count;
    g.max_relative = std::max(g.max_relative, e);
    g.mean_relative += e;
    report.overall_max = std::max(report.overall_max, e);
    sum += e;
  }
  report.overall_mean = sum / static_cast<double>(pairs.size());
  for (auto& [name, g] : by_group) {
    g.mean_relative /= static_cast<double>(g.count);
    g.flagged = g.max_relative > threshold;
    report.any_flagged = report.any_flagged || g.flagged;
    report.groups.push_back(g);
  }
  return report;
}

double Histogram::overlay(double x) const {
  if (degenerate || !(std > 0.0)) return 0.0;
  std::size_t n = 0;
  for (auto c : counts) n += c;
  const double z = (x - mean) / std;
  return static_cast<double>(n) * width * std::exp(-0.5 * z * z) / (std * std::sqrt(2.0 * std::numbers::pi));
}

Histogram residual_histogram(const std::vector<double>& values, int bins) {
  require(values.size() >= 2, ErrorKind::InsufficientData, "a histogram needs at least 2 residuals");
  require(bins >= 1, ErrorKind::InvalidArgument, "bin count must be positive");
  for (double v : values) require(std::isfinite(v), ErrorKind::InvalidArgument, "residuals must be finite");
  const auto s = summarize(values);
  Histogram h;
  h.mean = s.mean;
  h.std = s.std.value_or(0.0);
  h.lower = s.min;
  if (s.max == s.min) {
    h.degenerate = true;
    h.counts = {values.size()};
    return h;
  }
  h.width = (s.max - s.min) / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const std::size_t last = h.counts.size() - 1;
  for (double v : values) {
    auto k = static_cast<std::size_t>(std::clamp(std::floor((v - h.lower) / h.width), 0.0, static_cast<double>(last)));
    // Settle rounding so that the bin agrees with the published edges.
    while (k > 0 && v < h.edge(k)) --k;
    while (k < last && v >= h.edge(k + 1)) ++k;
    ++h.counts[k];
  }
  return h;
}

MeanComparison mean_comparison(const std::vector<PredictionPair>& pairs) {
  check_pairs(pairs);
  MeanComparison out;
  std::vector<double> diffs;
  for (const auto& p : pairs) {
    out.points.push_back({0.5 * (p.measured + p.predicted), p.measured - p.predicted});
    diffs.push_back(p.measured - p.predicted);
  }
  const auto s = summarize(diffs);
  out.bias = s.mean;
  if (s.std) {
    out.lower_limit = s.mean - 1.96 * *s.std;
    out.upper_limit = s.mean + 1.96 * *s.std;
  }
  return out;
}

double r_fit(const std::vector<PredictionPair>& pairs) {
  check_pairs(pairs);
  std::vector<double> m, p;
  for (const auto& x : pairs) {
    m.push_back(x.measured);
    p.push_back(x.predicted);
  }
  return ann::r_fit(m, p);
}

}  // namespace idt::stats
