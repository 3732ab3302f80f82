#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "idt/ann.hpp"
#include "idt/fixture.hpp"
#include "idt/numeric/levenberg_marquardt.hpp"
#include "test_util.hpp"

using namespace idt;
using namespace idt::ann;
using idt::testing::raises;

namespace {

NetworkParameters random_network(std::uint64_t seed, double range = 1.5) {
  Rng r(seed);
  auto p = NetworkParameters::zeros();
  for (int j = 0; j < p.hidden(); ++j) {
    for (int i = 0; i < kInputs; ++i) p.input_weights(j, i) = r.uniform(-range, range);
    p.output_weights(j) = r.uniform(-range, range);
    p.hidden_biases(j) = r.uniform(-range, range);
  }
  p.output_bias = r.uniform(-range, range);
  return p;
}

InputVector random_input(Rng& r) {
  InputVector x;
  for (int i = 0; i < kInputs; ++i) x(i) = r.uniform(-1.0, 1.0);
  return x;
}

std::vector<Example> examples(std::size_t n) {
  return fixture::sample_dataset(fixture::hidden_network(), n, 0.0, 1);
}

}  // namespace

TEST(Sigmoid, Values) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(1000.0), 1.0, 1e-12);
  EXPECT_NEAR(sigmoid(-1000.0), 0.0, 1e-12);
  EXPECT_TRUE(std::isfinite(sigmoid(-1e6)));
  EXPECT_NEAR(sigmoid(1.0), 0.73105857863000488, 1e-15);
}

TEST(Forward, ZeroParametersGiveHalf) {
  const auto p = NetworkParameters::zeros();
  Rng r(1);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(forward_raw(p, random_input(r)), 0.5);
}

TEST(Forward, HiddenPermutationInvariant) {
  const auto p = random_network(2);
  auto q = p;
  const std::vector<int> perm = {3, 7, 0, 9, 1, 5, 2, 8, 4, 6};
  for (int j = 0; j < p.hidden(); ++j) {
    q.input_weights.row(j) = p.input_weights.row(perm[static_cast<std::size_t>(j)]);
    q.output_weights(j) = p.output_weights(perm[static_cast<std::size_t>(j)]);
    q.hidden_biases(j) = p.hidden_biases(perm[static_cast<std::size_t>(j)]);
  }
  Rng r(3);
  for (int k = 0; k < 10; ++k) {
    const auto x = random_input(r);
    EXPECT_NEAR(forward_raw(p, x), forward_raw(q, x), 1e-15);
  }
}

TEST(Forward, PresetAtOrigin) {
  const auto p = load_network(std::filesystem::path(IDT_ASSET_DIR) / "ann_preset_v1.json");
  EXPECT_EQ(p.hidden(), 10);
  // Oracle: tests/oracles/generate.py.
  EXPECT_NEAR(forward_raw(p, InputVector::Zero()), 0.84549269008107129837, 1e-12);
}

TEST(Forward, ExtrapolationWarns) {
  const auto net = fixture::hidden_network();
  FeatureVector f = examples(1).front().features;
  std::vector<std::string> warnings;
  forward(net, f, &warnings);
  EXPECT_TRUE(warnings.empty());
  f.complex_modulus = 5000.0;
  forward(net, f, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Gradient, InputMatchesFiniteDifference) {
  Rng r(11);
  for (int k = 0; k < 20; ++k) {
    const auto p = random_network(100 + static_cast<std::uint64_t>(k));
    const auto x = random_input(r);
    const auto g = input_gradient(p, x);
    for (int i = 0; i < kInputs; ++i) {
      InputVector a = x, b = x;
      a(i) += 1e-5;
      b(i) -= 1e-5;
      const double fd = (forward_raw(p, a) - forward_raw(p, b)) / 2e-5;
      EXPECT_NEAR(g(i), fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Gradient, ParametersMatchFiniteDifference) {
  Rng r(12);
  const auto p = random_network(7);
  const auto x = random_input(r);
  const auto g = parameter_gradient(p, x);
  const auto w = pack(p);
  ASSERT_EQ(w.size(), p.parameter_count());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    auto a = w, b = w;
    a(k) += 1e-5;
    b(k) -= 1e-5;
    const double fd = (forward_raw(unpack(a, p), x) - forward_raw(unpack(b, p), x)) / 2e-5;
    EXPECT_NEAR(g(k), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Pack, RoundTrip) {
  const auto p = random_network(4);
  const auto q = unpack(pack(p), p);
  EXPECT_EQ(pack(q), pack(p));
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [&] { unpack(Eigen::VectorXd::Zero(3), p); }));
}

TEST(Split, Proportions) {
  auto s = split(examples(240), 1);
  EXPECT_EQ(s.training.size(), 168u);
  EXPECT_EQ(s.validation.size(), 36u);
  EXPECT_EQ(s.testing.size(), 36u);
  s = split(examples(10), 1);
  EXPECT_EQ(s.training.size(), 7u);
  EXPECT_EQ(s.validation.size(), 2u);
  EXPECT_EQ(s.testing.size(), 1u);
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { split(examples(9), 1); }));
}

TEST(Split, DeterministicPartition) {
  const auto data = examples(100);
  const auto a = split(data, 5);
  const auto b = split(data, 5);
  const auto c = split(data, 6);
  auto targets = [](const std::vector<Example>& v) {
    std::vector<double> t;
    for (const auto& e : v) t.push_back(e.target);
    return t;
  };
  EXPECT_EQ(targets(a.training), targets(b.training));
  EXPECT_EQ(targets(a.testing), targets(b.testing));
  EXPECT_NE(targets(a.training), targets(c.training));

  std::multiset<double> all;
  for (const auto* s : {&a.training, &a.validation, &a.testing})
    for (const auto& e : *s) all.insert(e.target);
  std::multiset<double> original;
  for (const auto& e : data) original.insert(e.target);
  EXPECT_EQ(all, original);
}

TEST(RFit, Examples) {
  EXPECT_NEAR(r_fit({1, 2, 3}, {1, 2, 3}), 1.0, 1e-15);
  EXPECT_NEAR(r_fit({1, 2, 3}, {-1, -2, -3}), -1.0, 1e-15);
  // Oracle: 4.7 / sqrt(22.5).
  EXPECT_NEAR(r_fit({1, 2, 3, 4}, {1.1, 1.9, 3.2, 3.8}), 0.99084700018609219, 1e-14);
  EXPECT_TRUE(raises(ErrorKind::UndefinedCorrelation, [] { r_fit({1, 1, 1}, {1, 2, 3}); }));
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { r_fit({1}, {1}); }));
}

TEST(RFit, AffineInvariant) {
  const std::vector<double> m = {3, 1, 4, 1, 5, 9, 2, 6};
  const std::vector<double> p = {2.5, 1.5, 4.2, 0.7, 5.5, 8.1, 2.2, 6.6};
  std::vector<double> q;
  for (double v : p) q.push_back(3.0 * v + 100.0);
  EXPECT_NEAR(r_fit(m, p), r_fit(m, q), 1e-14);
}

TEST(Train, RecoversHiddenNetwork) {
  const auto data = examples(400);
  TrainingConfig cfg;
  cfg.restarts = 3;
  cfg.seed = 3;
  const auto result = train(split(data, 3), cfg);
  EXPECT_GE(result.report.test_r_fit, 0.99);
  // Accepted LM steps never increase the training loss.
  const auto& h = result.report.train_mse;
  for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] * (1.0 + 1e-12));
}

TEST(Train, ConstantTarget) {
  auto data = examples(60);
  for (auto& e : data) e.target = 5000.0;
  const auto result = train(split(data, 1));
  for (const auto& e : data) EXPECT_NEAR(forward(result.params, e.features), 5000.0, 5000.0 * 1e-4);
}

TEST(Train, Errors) {
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { train(SplitDataset{}); }));
  auto s = split(examples(20), 1);
  s.training.front().target = -1.0;
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [&] { train(s); }));
}

TEST(Serialization, RoundTrip) {
  idt::testing::ScratchDir dir("ann_json");
  const auto net = fixture::hidden_network();
  save_network(net, dir.path() / "n.json");
  const auto back = load_network(dir.path() / "n.json");
  EXPECT_EQ(pack(back), pack(net));
  EXPECT_DOUBLE_EQ(back.output_scaling.phys_max, net.output_scaling.phys_max);
  EXPECT_TRUE(raises(ErrorKind::IngestionError, [&] { load_network(dir.path() / "missing.json"); }));
}

// With lambda = 0 the step is the Gauss-Newton step; as lambda grows it
// approaches -J^T r / lambda.
TEST(LevenbergMarquardt, StepLimits) {
  Eigen::MatrixXd j(3, 2);
  j << 1.0, 2.0, 0.5, -1.0, 3.0, 0.2;
  Eigen::VectorXd r(3);
  r << 0.3, -0.7, 1.1;
  Eigen::VectorXd delta;
  ASSERT_TRUE(numeric::lm_step(j, r, 0.0, delta));
  const Eigen::VectorXd gn = -(j.transpose() * j).inverse() * j.transpose() * r;
  EXPECT_NEAR((delta - gn).norm(), 0.0, 1e-12);

  const double lambda = 1e8;
  ASSERT_TRUE(numeric::lm_step(j, r, lambda, delta));
  const Eigen::VectorXd gd = -j.transpose() * r / lambda;
  EXPECT_NEAR((delta - gd).norm() / gd.norm(), 0.0, 1e-6);
}
