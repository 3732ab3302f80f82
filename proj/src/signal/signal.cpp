#include "idt/signal.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "idt/error.hpp"
#include "idt/simd/kernels.hpp"

namespace idt::signal {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::ForceKN: return "force-kN";
    case Unit::DisplacementMM: return "displacement-mm";
    case Unit::StressKPa: return "stress-kPa";
    case Unit::Strain: return "strain-unitless";
  }
  return "unknown";
}

TimeSeries::TimeSeries(std::vector<Sample> samples, Unit unit) : samples_(std::move(samples)), unit_(unit) {}

TimeSeries::TimeSeries(std::span<const double> times, std::span<const double> values, Unit unit) : unit_(unit) {
  require(times.size() == values.size(), ErrorKind::InvalidArgument, "time and value arrays differ in length");
  samples_.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) samples_.push_back({times[i], values[i]});
}

double TimeSeries::start_time() const { return samples_.empty() ? 0.0 : samples_.front().time; }
double TimeSeries::end_time() const { return samples_.empty() ? 0.0 : samples_.back().time; }

void TimeSeries::validate(double frequency) const {
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    require(samples_[i].time > samples_[i - 1].time, ErrorKind::InvalidArgument,
            "sample times must be strictly increasing");
  }
  for (const auto& s : samples_) {
    require(std::isfinite(s.time) && std::isfinite(s.value), ErrorKind::InvalidArgument, "non-finite sample");
  }
  if (frequency > 0.0 && samples_.size() >= 2) {
    double max_dt = 0.0;
    for (std::size_t i = 1; i < samples_.size(); ++i) max_dt = std::max(max_dt, samples_[i].time - samples_[i - 1].time);
    require(max_dt <= 0.5 / frequency * (1.0 + 1e-9), ErrorKind::InvalidArgument,
            "sampling is below two samples per period");
  }
}

double SinusoidFit::evaluate(double t) const {
  return offset + amplitude * std::sin(kTwoPi * frequency * t - phase);
}

double wrap_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

SinusoidFit fit_sinusoid(const TimeSeries& series, double frequency) {
  require(frequency > 0.0, ErrorKind::InvalidArgument, "frequency must be positive");
  require(series.size() >= 3, ErrorKind::InsufficientData, "sinusoid fit needs at least 3 samples");
  series.validate(frequency);
  require(series.duration() * frequency >= 1.0 - 1e-9, ErrorKind::InsufficientData,
          "series must span at least one full period");

  const std::size_t n = series.size();
  const double omega = kTwoPi * frequency;
  std::vector<double> s(n), c(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& smp = series.samples()[i];
    s[i] = std::sin(omega * smp.time);
    c[i] = std::cos(omega * smp.time);
    v[i] = smp.value;
  }

  const auto& k = simd::active();
  Eigen::Matrix3d normal;
  normal(0, 0) = k.dot(s.data(), s.data(), n);
  normal(0, 1) = normal(1, 0) = k.dot(s.data(), c.data(), n);
  normal(1, 1) = k.dot(c.data(), c.data(), n);
  normal(0, 2) = normal(2, 0) = k.sum(s.data(), n);
  normal(1, 2) = normal(2, 1) = k.sum(c.data(), n);
  normal(2, 2) = static_cast<double>(n);
  const Eigen::Vector3d rhs(k.dot(v.data(), s.data(), n), k.dot(v.data(), c.data(), n), k.sum(v.data(), n));
  const Eigen::Vector3d coef = normal.ldlt().solve(rhs);

  SinusoidFit fit;
  fit.frequency = frequency;
  fit.amplitude = std::hypot(coef(0), coef(1));
  fit.phase = fit.amplitude > 0.0 ? wrap_two_pi(std::atan2(-coef(1), coef(0))) : 0.0;
  fit.offset = coef(2);

  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = v[i] - (coef(0) * s[i] + coef(1) * c[i] + coef(2));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

TimeSeries last_n_cycles(const TimeSeries& series, double frequency, int n) {
  require(frequency > 0.0, ErrorKind::InvalidArgument, "frequency must be positive");
  require(n >= 1, ErrorKind::InvalidArgument, "cycle count must be positive");
  const double window = n / frequency;
  const double eps = 1e-9 * window;
  require(!series.empty() && series.duration() >= window - eps, ErrorKind::InsufficientData,
          "series is shorter than the requested number of cycles");
  const double start = series.end_time() - window;
  std::vector<Sample> kept;
  for (const auto& s : series.samples())
    if (s.time >= start - eps) kept.push_back(s);
  return TimeSeries(std::move(kept), series.unit());
}

double relative_phase(const SinusoidFit& load, const SinusoidFit& response, double tolerance) {
  require(std::abs(load.frequency - response.frequency) <= 1e-12 * std::max(load.frequency, response.frequency),
          ErrorKind::InvalidArgument, "fits are at different frequencies");
  double lag = wrap_two_pi(response.phase - load.phase);
  if (lag > kTwoPi - tolerance) lag = 0.0;
  if (lag > std::numbers::pi / 2.0 + tolerance) {
    fail(ErrorKind::OutOfRange, "phase lag " + std::to_string(lag) + " rad exceeds pi/2");
  }
  return std::min(lag, std::numbers::pi / 2.0);
}

TimeSeries synthesize(const SinusoidFit& fit, std::span<const double> times, Unit unit) {
  std::vector<Sample> samples;
  samples.reserve(times.size());
  for (double t : times) samples.push_back({t, fit.evaluate(t)});
  return TimeSeries(std::move(samples), unit);
}

}  // namespace idt::signal
