#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "idt/stats.hpp"
#include "test_util.hpp"

using namespace idt;
using namespace idt::stats;
using idt::testing::raises;

namespace {

std::vector<PredictionPair> pairs(const std::vector<double>& measured, const std::vector<double>& predicted,
                                  const std::string& group = "g") {
  std::vector<PredictionPair> out;
  for (std::size_t i = 0; i < measured.size(); ++i) out.push_back({measured[i], predicted[i], group, 20.0, 1.0});
  return out;
}

std::vector<PredictionPair> random_pairs(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> m(100.0, 20000.0);
  std::normal_distribution<double> e(0.0, 0.2);
  std::vector<PredictionPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double measured = m(gen);
    out.push_back({measured, measured * (1.0 + e(gen)), "g" + std::to_string(i % 3), 20.0, 1.0});
  }
  return out;
}

}  // namespace

TEST(Residuals, Examples) {
  auto r = residuals(pairs({100, 200}, {100, 200}));
  EXPECT_EQ(r.values, (std::vector<double>{0, 0}));
  EXPECT_EQ(r.summary.mean, 0.0);

  r = residuals(pairs({100, 200}, {90, 210}));
  EXPECT_EQ(r.values, (std::vector<double>{10, -10}));
  EXPECT_EQ(r.summary.mean, 0.0);
  ASSERT_TRUE(r.summary.std.has_value());
  EXPECT_NEAR(*r.summary.std, std::sqrt(200.0), 1e-12);
  EXPECT_EQ(r.summary.min, -10.0);
  EXPECT_EQ(r.summary.max, 10.0);

  r = residuals(pairs({100}, {80}));
  EXPECT_EQ(r.values.size(), 1u);
  EXPECT_FALSE(r.summary.std.has_value());

  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { residuals({}); }));
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [] { residuals(pairs({0.0}, {1.0})); }));
}

TEST(Residuals, TranslationConsistent) {
  std::mt19937_64 gen(1);
  auto p = random_pairs(gen, 50);
  const auto before = residuals(p).values;
  for (auto& x : p) x.predicted += 12.5;
  const auto after = residuals(p).values;
  // Rounding is relative to the moduli, not to the residuals.
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(after[i], before[i] - 12.5, 1e-12 * p[i].measured);
}

TEST(AccuracyCurve, Counting) {
  const auto c = accuracy_curve(pairs({100, 100, 100}, {105, 115, 125}), {0.1, 0.2, 0.3});
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_NEAR(c.points[0].accuracy, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(c.points[1].accuracy, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(c.points[2].accuracy, 1.0);
}

TEST(AccuracyCurve, ExactPredictions) {
  const auto c = accuracy_curve(pairs({10, 20, 30}, {10, 20, 30}), {1e-12, 0.01, 0.5});
  for (const auto& p : c.points) EXPECT_EQ(p.accuracy, 1.0);
}

TEST(AccuracyCurve, MonotoneAgainstRecount) {
  std::mt19937_64 gen(2);
  const auto p = random_pairs(gen, 200);
  const auto tol = default_tolerances();
  const auto c = accuracy_curve(p, tol);
  for (std::size_t k = 0; k < tol.size(); ++k) {
    std::size_t hits = 0;
    for (const auto& x : p) hits += std::abs(x.measured - x.predicted) / x.measured <= tol[k];
    EXPECT_EQ(c.points[k].accuracy, static_cast<double>(hits) / 200.0);
    if (k) EXPECT_GE(c.points[k].accuracy, c.points[k - 1].accuracy);
  }
}

TEST(AccuracyCurve, AbsoluteMode) {
  const auto c = accuracy_curve(pairs({100, 100}, {95, 80}), {10.0, 30.0}, ToleranceMode::Absolute);
  EXPECT_EQ(c.points[0].accuracy, 0.5);
  EXPECT_EQ(c.points[1].accuracy, 1.0);
}

TEST(AccuracyCurve, Errors) {
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { accuracy_curve({}, {0.1}); }));
  const auto p = pairs({100}, {100});
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [&] { accuracy_curve(p, {0.2, 0.1}); }));
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [&] { accuracy_curve(p, {0.0, 0.1}); }));
}

TEST(DefaultTolerances, Grid) {
  const auto t = default_tolerances();
  ASSERT_EQ(t.size(), 100u);
  EXPECT_NEAR(t.front(), 0.01, 1e-15);
  EXPECT_NEAR(t.back(), 1.0, 1e-15);
}

TEST(RelativeErrorReport, Flags) {
  auto p = pairs({100, 100}, {110, 90}, "a");
  auto report = relative_error_report(p);
  EXPECT_FALSE(report.any_flagged);
  EXPECT_NEAR(report.overall_max, 0.1, 1e-12);

  auto q = pairs({100, 100}, {125, 95}, "b");
  p.insert(p.end(), q.begin(), q.end());
  report = relative_error_report(p);
  ASSERT_EQ(report.groups.size(), 2u);
  EXPECT_FALSE(report.groups[0].flagged);
  EXPECT_TRUE(report.groups[1].flagged);
  EXPECT_NEAR(report.groups[1].max_relative, 0.25, 1e-12);
  EXPECT_NEAR(report.groups[1].mean_relative, 0.15, 1e-12);
}

// Some groups exceed a strict threshold while every point stays under 20%.
TEST(RelativeErrorReport, StricterThresholdSeparatesGroups) {
  std::vector<PredictionPair> p;
  for (int g = 1; g <= 9; ++g) {
    const double err = g >= 7 ? 0.15 : 0.05;
    auto q = pairs({1000, 2000}, {1000 * (1 + err), 2000 * (1 - err)}, std::to_string(g));
    p.insert(p.end(), q.begin(), q.end());
  }
  EXPECT_FALSE(relative_error_report(p, 0.20).any_flagged);
  const auto strict = relative_error_report(p, 0.10);
  for (const auto& g : strict.groups) EXPECT_EQ(g.flagged, std::stoi(g.group) >= 7) << g.group;
}

TEST(Histogram, SymmetricBars) {
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(-1.0), v.push_back(1.0);
  const auto h = residual_histogram(v, 2);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{50, 50}));
  EXPECT_NEAR(h.mean, 0.0, 1e-15);
  EXPECT_FALSE(h.degenerate);
}

TEST(Histogram, Degenerate) {
  const auto h = residual_histogram(std::vector<double>(10, 0.0), 5);
  EXPECT_TRUE(h.degenerate);
  ASSERT_EQ(h.counts.size(), 1u);
  EXPECT_EQ(h.counts[0], 10u);
}

TEST(Histogram, MatchesRecount) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> n(3.0, 2.0);
  std::vector<double> v(500);
  for (auto& x : v) x = n(gen);
  const int bins = 17;
  const auto h = residual_histogram(v, bins);
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  std::vector<std::size_t> oracle(bins, 0);
  for (double x : v) {
    int k = 0;
    while (k < bins - 1 && x >= lo + (k + 1) * (hi - lo) / bins) ++k;
    ++oracle[static_cast<std::size_t>(k)];
  }
  EXPECT_EQ(h.counts, oracle);
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, v.size());
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { residual_histogram({1.0}, 3); }));
}

TEST(MeanComparison, Examples) {
  auto m = mean_comparison(pairs({100, 200}, {100, 200}));
  for (const auto& p : m.points) EXPECT_EQ(p.difference, 0.0);
  EXPECT_EQ(m.lower_limit.value(), 0.0);
  EXPECT_EQ(m.upper_limit.value(), 0.0);

  m = mean_comparison(pairs({100}, {80}));
  ASSERT_EQ(m.points.size(), 1u);
  EXPECT_EQ(m.points[0].mean, 90.0);
  EXPECT_EQ(m.points[0].difference, 20.0);
}

TEST(MeanComparison, LimitsMatchFormula) {
  std::mt19937_64 gen(4);
  const auto p = random_pairs(gen, 100);
  const auto m = mean_comparison(p);
  double mean = 0.0;
  for (const auto& x : p) mean += x.measured - x.predicted;
  mean /= 100.0;
  double ss = 0.0;
  for (const auto& x : p) ss += std::pow(x.measured - x.predicted - mean, 2);
  const double sd = std::sqrt(ss / 99.0);
  EXPECT_NEAR(m.bias, mean, 1e-9);
  EXPECT_NEAR(*m.lower_limit, mean - 1.96 * sd, 1e-9);
  EXPECT_NEAR(*m.upper_limit, mean + 1.96 * sd, 1e-9);
}

TEST(RFit, OrderInvariant) {
  std::mt19937_64 gen(6);
  auto p = random_pairs(gen, 40);
  const double a = r_fit(p);
  std::shuffle(p.begin(), p.end(), gen);
  EXPECT_NEAR(r_fit(p), a, 1e-13);
}
