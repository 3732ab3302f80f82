#pragma once

// Validation statistics for predicted vs measured moduli.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace idt::stats {

struct PredictionPair {
  double measured = 0.0;   // MPa, > 0
  double predicted = 0.0;  // MPa
  std::string group;
  double temperature = 0.0;  // C
  double frequency = 0.0;    // Hz
};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> std;  // sample standard deviation, absent for one value
};

Summary summarize(const std::vector<double>& values);

struct Residuals {
  std::vector<double> values;  // measured - predicted
  Summary summary;
};

/// Throws InsufficientData for an empty input and InvalidArgument when a
/// measured value is not positive.
Residuals residuals(const std::vector<PredictionPair>& pairs);

enum class ToleranceMode { Relative, Absolute };

struct AccuracyPoint {
  double tolerance = 0.0;
  double accuracy = 0.0;  // fraction in [0, 1]
};

struct AccuracyCurve {
  std::vector<AccuracyPoint> points;
};

/// Fraction of pairs with |d| / measured <= tolerance (|d| <= tolerance in
/// absolute mode).  Tolerances must be positive and strictly increasing.
AccuracyCurve accuracy_curve(const std::vector<PredictionPair>& pairs, const std::vector<double>& tolerances,
                             ToleranceMode mode = ToleranceMode::Relative);

/// 0.01, 0.02, ..., 1.00.
std::vector<double> default_tolerances();

struct GroupError {
  std::string group;
  std::size_t count = 0;
  double max_relative = 0.0;
  double mean_relative = 0.0;
  bool flagged = false;
};

struct RelativeErrorReport {
  double threshold = 0.20;
  std::vector<GroupError> groups;  // sorted by group name
  double overall_max = 0.0;
  double overall_mean = 0.0;
  bool any_flagged = false;
};

/// Groups are flagged when their largest relative error exceeds `threshold`.
RelativeErrorReport relative_error_report(const std::vector<PredictionPair>& pairs, double threshold = 0.20);

struct Histogram {
  double lower = 0.0;
  double width = 0.0;
  std::vector<std::size_t> counts;
  double mean = 0.0;
  double std = 0.0;
  /// All residuals equal: one bin of zero width and no normal overlay.
  bool degenerate = false;

  double edge(std::size_t k) const { return lower + static_cast<double>(k) * width; }
  double centre(std::size_t k) const { return lower + (static_cast<double>(k) + 0.5) * width; }
  /// Expected count in a bin of this width for a normal with the sample mean and std.
  double overlay(double x) const;
};

/// Equal-width bins over [min, max]; bin k holds edge(k) <= x < edge(k+1) and
/// the last bin also holds the maximum.  Needs at least 2 values.
Histogram residual_histogram(const std::vector<double>& values, int bins);

struct MeanDifference {
  double mean = 0.0;        // (measured + predicted) / 2
  double difference = 0.0;  // measured - predicted
};

struct MeanComparison {
  std::vector<MeanDifference> points;
  double bias = 0.0;
  std::optional<double> lower_limit;  // bias - 1.96 std
  std::optional<double> upper_limit;  // bias + 1.96 std
};

MeanComparison mean_comparison(const std::vector<PredictionPair>& pairs);

/// Pearson correlation of measured vs predicted.
double r_fit(const std::vector<PredictionPair>& pairs);

}  // namespace idt::stats
