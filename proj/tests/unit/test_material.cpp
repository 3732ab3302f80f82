#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "idt/fixture.hpp"
#include "idt/material.hpp"
#include "test_util.hpp"

using namespace idt;
using namespace idt::material;
using idt::testing::raises;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1)));
  return out;
}

ComplexModulusRecord from_series(const PronySeries& s, double temperature, double frequency) {
  const double w = kTwoPi * frequency;
  return {temperature, frequency, s.magnitude(w), s.phase(w) * 180.0 / std::numbers::pi};
}

}  // namespace

TEST(StorageModulus, Examples) {
  EXPECT_DOUBLE_EQ(storage_modulus({20, 1, 1000, 0.0}), 1000.0);
  EXPECT_NEAR(storage_modulus({20, 1, 1000, 90.0}), 0.0, 1e-12);
  EXPECT_NEAR(storage_modulus({17.1, 25, 12573, 30.0}), 12573.0 * std::sqrt(3.0) / 2.0, 1e-9);
  EXPECT_NEAR(storage_modulus({17.1, 25, 12573, 30.0}), 10888.5, 0.05);
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [] { storage_modulus({20, 1, 1000, std::nullopt}); }));
}

TEST(StorageModulus, NeverExceedsMagnitude) {
  for (double phi = 0.0; phi <= 90.0; phi += 7.5) {
    const ComplexModulusRecord r{20, 1, 500, phi};
    EXPECT_LE(storage_modulus(r), r.magnitude);
    if (phi > 0.0) EXPECT_LT(storage_modulus(r), r.magnitude);
  }
}

TEST(ComplexModulusRecord, Validation) {
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [] { ComplexModulusRecord{20, 1, 100, 95.0}.validate(); }));
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [] { ComplexModulusRecord{20, 0, 100, 10.0}.validate(); }));
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [] { ComplexModulusRecord{20, 1, -1, 10.0}.validate(); }));
}

TEST(Wlf, Examples) {
  const WlfParameters p{-17.44, 51.6, 17.1};
  EXPECT_EQ(wlf_shift(p, 17.1), 0.0);
  // Oracle: tests/oracles/generate.py.
  EXPECT_NEAR(wlf_shift(p, 33.8), -4.2642459736456808, 1e-13);
  EXPECT_TRUE(raises(ErrorKind::SingularTemperature, [&] { wlf_shift(p, 17.1 - 51.6); }));
}

TEST(Wlf, FitNoiseless) {
  const WlfParameters truth{-12.5, 95.0, 17.1};
  ShiftFactors s;
  for (double t : {0.4, 17.1, 33.8}) s[t] = wlf_shift(truth, t);
  const auto fit = fit_wlf(s, 17.1);
  EXPECT_NEAR(fit.params.c1, truth.c1, 1e-6 * std::abs(truth.c1));
  EXPECT_NEAR(fit.params.c2, truth.c2, 1e-6 * truth.c2);
}

// 1% noise against a dense (C1, C2) grid-search oracle.
TEST(Wlf, FitNoisyMatchesGridSearch) {
  const WlfParameters truth{-15.0, 80.0, 20.0};
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  ShiftFactors s;
  for (double t : {-10.0, 0.0, 10.0, 20.0, 30.0, 40.0, 54.0}) s[t] = wlf_shift(truth, t) * (1.0 + (t == 20.0 ? 0.0 : u(gen)));
  const auto fit = fit_wlf(s, 20.0);

  double best = 1e300, bc1 = 0, bc2 = 0;
  for (double c1 = -25.0; c1 <= -8.0; c1 += 0.01) {
    for (double c2 = 40.0; c2 <= 140.0; c2 += 0.05) {
      double sse = 0.0;
      for (auto [t, v] : s) {
        const double r = c1 * (t - 20.0) / (c2 + t - 20.0) - v;
        sse += r * r;
      }
      if (sse < best) best = sse, bc1 = c1, bc2 = c2;
    }
  }
  EXPECT_NEAR(fit.params.c1, bc1, 0.05 * std::abs(bc1));
  EXPECT_NEAR(fit.params.c2, bc2, 0.05 * bc2);
  EXPECT_NEAR(fit.params.c1, truth.c1, 0.05 * std::abs(truth.c1));
  EXPECT_NEAR(fit.params.c2, truth.c2, 0.05 * truth.c2);
}

TEST(Wlf, FitNeedsTwoTemperatures) {
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { fit_wlf({{17.1, 0.0}}, 17.1); }));
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { fit_wlf({{17.1, 0.0}, {30.0, -2.0}}, 17.1); }));
}

TEST(ShiftFactors, ExactTranslate) {
  const Sigmoid truth{1.0, 3.0, -0.5, -0.6};
  std::vector<ComplexModulusRecord> r;
  for (double f : log_space(0.1, 25, 9)) {
    r.push_back({20.0, f, std::pow(10.0, truth.log_modulus(std::log10(f))), std::nullopt});
    r.push_back({10.0, f, std::pow(10.0, truth.log_modulus(std::log10(10.0 * f))), std::nullopt});
  }
  const auto s = fit_shift_factors(r, 20.0);
  EXPECT_EQ(s.at(20.0), 0.0);
  EXPECT_NEAR(s.at(10.0), 1.0, 1e-3);
}

TEST(ShiftFactors, KnownShifts) {
  const Sigmoid truth{1.2, 3.1, -0.8, -0.55};
  const std::map<double, double> shifts{{10.0, 0.0}, {25.0, -1.2}, {40.0, -2.9}};
  std::vector<ComplexModulusRecord> r;
  for (auto [t, s] : shifts)
    for (double f : log_space(0.1, 25, 9)) r.push_back({t, f, std::pow(10.0, truth.log_modulus(std::log10(f) + s)), std::nullopt});
  const auto fit = fit_shift_factors(r, 10.0);
  for (auto [t, s] : shifts) EXPECT_NEAR(fit.at(t), s, 0.05) << t;
}

TEST(ShiftFactors, SingleTemperature) {
  std::vector<ComplexModulusRecord> r{{17.1, 1, 100, std::nullopt}, {17.1, 10, 200, std::nullopt}};
  const auto s = fit_shift_factors(r, 17.1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.at(17.1), 0.0);
  r.push_back({30.0, 1, 50, std::nullopt});
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [&] { fit_shift_factors(r, 17.1); }));
}

TEST(Prony, SingleMaxwellRecovery) {
  const auto truth = PronySeries::from_moduli(10.0, {100.0}, {0.1});
  std::vector<ComplexModulusRecord> r;
  for (double f : log_space(0.01, 100, 12)) r.push_back(from_series(truth, 20.0, f));
  const auto fit = fit_prony(r, 81);
  fit.validate();
  for (const auto& rec : r) {
    const double w = kTwoPi * rec.frequency;
    EXPECT_NEAR(fit.storage(w), truth.storage(w), 0.005 * truth.storage(w)) << rec.frequency;
    EXPECT_NEAR(fit.loss(w), truth.loss(w), 0.005 * truth.loss(w)) << rec.frequency;
  }
}

TEST(Prony, ElasticData) {
  std::vector<ComplexModulusRecord> r;
  for (double f : log_space(0.1, 25, 9)) r.push_back({20.0, f, 300.0, 0.0});
  const auto fit = fit_prony(r, 10);
  EXPECT_NEAR(fit.sum_g(), 0.0, 1e-9);
  EXPECT_NEAR(fit.long_term_modulus, fit.instantaneous_modulus, 1e-9 * fit.instantaneous_modulus);
  EXPECT_NEAR(fit.instantaneous_modulus, 300.0, 1e-6);
}

TEST(Prony, Errors) {
  std::vector<ComplexModulusRecord> r{{20.0, 1.0, 100.0, 10.0}};
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [&] { fit_prony(r, 0); }));
  EXPECT_TRUE(raises(ErrorKind::InsufficientData, [] { fit_prony({}, 5); }));
  r.front().phase_deg.reset();
  EXPECT_TRUE(raises(ErrorKind::InvalidArgument, [&] { fit_prony(r, 5); }));
}

TEST(Prony, ForwardProperties) {
  const auto s = PronySeries::from_moduli(5.0, {40.0, 100.0, 30.0}, {1e-3, 0.1, 10.0});
  s.validate();
  EXPECT_NEAR(s.long_term_modulus, s.instantaneous_modulus * (1.0 - s.sum_g()), 1e-9 * s.instantaneous_modulus);
  double previous = 0.0;
  for (double w : log_space(1e-6, 1e6, 200)) {
    EXPECT_GE(s.storage(w), previous);
    EXPECT_GE(s.loss(w), 0.0);
    previous = s.storage(w);
    const double phi = s.phase(w);
    EXPECT_GE(phi, 0.0);
    EXPECT_LE(phi, std::numbers::pi / 2);
  }
  EXPECT_NEAR(s.storage(1e-9), s.long_term_modulus, 1e-4);
  EXPECT_NEAR(s.storage(1e9), s.instantaneous_modulus, 1e-3);
  EXPECT_NEAR(s.relaxation(0.0), s.instantaneous_modulus, 1e-12);
}

TEST(Prony, JsonRoundTrip) {
  const auto s = PronySeries::from_moduli(5.0, {40.0, 100.0}, {1e-3, 0.1});
  const auto back = prony_from_json(to_json(s));
  EXPECT_DOUBLE_EQ(back.instantaneous_modulus, s.instantaneous_modulus);
  ASSERT_EQ(back.terms.size(), 2u);
  EXPECT_DOUBLE_EQ(back.terms[1].tau, 0.1);
}

TEST(MasterCurve, InverseCrime) {
  const Sigmoid truth{1.5, 3.0, -1.0, -0.5};
  const WlfParameters wlf{-14.0, 110.0, 17.1};
  std::vector<ComplexModulusRecord> r;
  for (double t : {0.4, 17.1, 33.8})
    for (double f : log_space(0.1, 25, 9))
      r.push_back({t, f, std::pow(10.0, truth.log_modulus(std::log10(f) + wlf_shift(wlf, t))), std::nullopt});
  const auto mc = build_master_curve(r, 17.1);
  EXPECT_LT(mc.log_rms, 1e-3);
  EXPECT_NEAR(mc.sigmoid.delta, truth.delta, 0.02 * std::abs(truth.delta));
  EXPECT_NEAR(mc.sigmoid.alpha, truth.alpha, 0.02 * std::abs(truth.alpha));
  EXPECT_NEAR(mc.sigmoid.beta, truth.beta, 0.02 * std::abs(truth.beta));
  EXPECT_NEAR(mc.sigmoid.gamma, truth.gamma, 0.02 * std::abs(truth.gamma));
  EXPECT_EQ(mc.shift_factors.at(17.1), 0.0);
}

TEST(MasterCurve, SingleTemperature) {
  std::vector<ComplexModulusRecord> r;
  const Sigmoid truth{1.5, 3.0, -1.0, -0.5};
  for (double f : log_space(0.1, 25, 9)) r.push_back({17.1, f, std::pow(10.0, truth.log_modulus(std::log10(f))), std::nullopt});
  const auto mc = build_master_curve(r, 17.1);
  ASSERT_EQ(mc.shift_factors.size(), 1u);
  EXPECT_LT(mc.log_rms, 1e-3);
}

TEST(MasterCurve, PublishedGroupOne) {
  const auto data = fixture::published_mixture_moduli().at("1");
  const auto mc = build_master_curve(data, 17.1);
  EXPECT_LT(mc.log_rms, 0.08);
  double previous = -1e300;
  for (double x = -3.0; x <= 4.0; x += 0.05) {
    const double y = mc.sigmoid.log_modulus(x);
    EXPECT_GE(y, previous - 1e-12);
    previous = y;
  }
}

// Adding c to every log frequency and subtracting it from every shift leaves
// the predicted moduli unchanged.
TEST(MasterCurve, ShiftInvariance) {
  const Sigmoid truth{1.2, 3.1, -0.8, -0.55};
  std::vector<ComplexModulusRecord> a, b;
  const double c = 0.7;
  for (double t : {5.0, 20.0, 35.0})
    for (double f : log_space(0.1, 25, 9)) {
      const double m = std::pow(10.0, truth.log_modulus(std::log10(f) - 0.08 * (t - 20.0)));
      a.push_back({t, f, m, std::nullopt});
      b.push_back({t, f * std::pow(10.0, c), m, std::nullopt});
    }
  const auto ma = build_master_curve(a, 20.0);
  const auto mb = build_master_curve(b, 20.0);
  for (const auto& r : a) {
    EXPECT_NEAR(ma.modulus(r.temperature, r.frequency), mb.modulus(r.temperature, r.frequency * std::pow(10.0, c)),
                1e-3 * r.magnitude);
  }
}

TEST(ShiftToReference, MovesFrequency) {
  const std::vector<ComplexModulusRecord> r{{33.8, 10.0, 100.0, 20.0}};
  const auto out = shift_to_reference(r, {{17.1, 0.0}, {33.8, -2.0}}, 17.1);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].frequency, 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(out[0].temperature, 17.1);
}
