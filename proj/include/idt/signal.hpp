#pragma once

// Reduction of cyclic load/displacement histories to sinusoid amplitude and
// phase.  Signals follow  value(t) = offset + amplitude * sin(w t - phase).

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace idt::signal {

enum class Unit { ForceKN, DisplacementMM, StressKPa, Strain };

std::string_view to_string(Unit unit);

struct Sample {
  double time = 0.0;   // s
  double value = 0.0;  // unit of the series
};

class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<Sample> samples, Unit unit);
  TimeSeries(std::span<const double> times, std::span<const double> values, Unit unit);

  const std::vector<Sample>& samples() const { return samples_; }
  Unit unit() const { return unit_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double start_time() const;
  double end_time() const;
  double duration() const { return end_time() - start_time(); }

  /// Throws InvalidArgument unless times strictly increase and, when
  /// frequency > 0, the sampling gives at least two samples per period.
  void validate(double frequency = 0.0) const;

 private:
  std::vector<Sample> samples_;
  Unit unit_ = Unit::DisplacementMM;
};

struct SinusoidFit {
  double amplitude = 0.0;
  double phase = 0.0;  // radians in [0, 2pi), lag convention
  double offset = 0.0;
  double frequency = 0.0;  // Hz, fixed
  double rms_residual = 0.0;

  double evaluate(double t) const;
};

/// Linear least squares on {sin wt, cos wt, 1} with w = 2 pi frequency.
SinusoidFit fit_sinusoid(const TimeSeries& series, double frequency);

/// The suffix of the series of duration n / frequency ending at the last sample.
TimeSeries last_n_cycles(const TimeSeries& series, double frequency, int n);

/// Lag of `response` behind `load`, wrapped into [0, 2pi) and checked to lie in
/// the admissible viscoelastic band [0, pi/2] (within `tolerance` rad).
double relative_phase(const SinusoidFit& load, const SinusoidFit& response, double tolerance = 1e-6);

TimeSeries synthesize(const SinusoidFit& fit, std::span<const double> times, Unit unit);

/// Wraps an angle into [0, 2pi).
double wrap_two_pi(double angle);

/// Reads a `time_s,value` CSV (header required); the unit is declared by the caller.
TimeSeries read_series_csv(const std::filesystem::path& path, Unit unit);

}  // namespace idt::signal
