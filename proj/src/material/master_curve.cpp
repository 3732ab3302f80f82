#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "idt/error.hpp"
#include "idt/material.hpp"
#include "idt/numeric/levenberg_marquardt.hpp"
#include "idt/numeric/scalar_minimize.hpp"

namespace idt::material {
namespace {

constexpr double kTemperatureMatch = 1e-9;

struct Isotherm {
  double temperature = 0.0;
  std::vector<double> x;  // log10 f, ascending
  std::vector<double> y;  // log10 |M|
};

std::vector<Isotherm> group_isotherms(const std::vector<ComplexModulusRecord>& records) {
  std::vector<Isotherm> groups;
  for (const auto& r : records) {
    r.validate();
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Isotherm& g) {
      return std::abs(g.temperature - r.temperature) <= kTemperatureMatch;
    });
    if (it == groups.end()) {
      groups.push_back({r.temperature, {}, {}});
      it = groups.end() - 1;
    }
    it->x.push_back(std::log10(r.frequency));
    it->y.push_back(std::log10(r.magnitude));
  }
  for (auto& g : groups) {
    std::vector<std::size_t> order(g.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.x[a] < g.x[b]; });
    Isotherm sorted{g.temperature, {}, {}};
    for (std::size_t i : order) {
      sorted.x.push_back(g.x[i]);
      sorted.y.push_back(g.y[i]);
    }
    g = std::move(sorted);
  }
  std::sort(groups.begin(), groups.end(),
            [](const Isotherm& a, const Isotherm& b) { return a.temperature < b.temperature; });
  return groups;
}

// Piecewise-linear interpolation with linear extrapolation from the end segments.
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  std::size_t hi = 1;
  while (hi + 1 < x.size() && at > x[hi]) ++hi;
  const std::size_t lo = hi - 1;
  const double dx = x[hi] - x[lo];
  if (dx <= 0.0) return 0.5 * (y[lo] + y[hi]);
  return y[lo] + (y[hi] - y[lo]) * (at - x[lo]) / dx;
}

double sigmoid_value(const Eigen::VectorXd& p, double x, double* e_out = nullptr) {
  const double alpha = std::exp(p(1));
  const double gamma = -std::exp(p(3));
  const double e = std::exp(std::min(700.0, p(2) + gamma * x));
  if (e_out) *e_out = e;
  return p(0) + alpha / (1.0 + e);
}

Sigmoid unpack(const Eigen::VectorXd& p) { return {p(0), std::exp(p(1)), p(2), -std::exp(p(3))}; }

Eigen::VectorXd initial_sigmoid(const std::vector<double>& x, const std::vector<double>& y) {
  const double ymin = *std::min_element(y.begin(), y.end());
  const double ymax = *std::max_element(y.begin(), y.end());
  const double span = std::max(ymax - ymin, 1e-3);
  const double delta = ymin - 0.25 * span;
  const double alpha = 1.5 * span;
  // Linearize: ln(alpha / (y - delta) - 1) = beta + gamma x.
  double sx = 0, sz = 0, sxx = 0, sxz = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = std::log(alpha / (y[i] - delta) - 1.0);
    sx += x[i];
    sz += z;
    sxx += x[i] * x[i];
    sxz += x[i] * z;
  }
  const double var = sxx - sx * sx / n;
  double gamma = var > 0.0 ? (sxz - sx * sz / n) / var : -0.5;
  if (!(gamma < -1e-3)) gamma = -0.5;
  const double beta = (sz - gamma * sx) / n;
  Eigen::VectorXd p(4);
  p << delta, std::log(alpha), beta, std::log(-gamma);
  return p;
}

Eigen::VectorXd fit_sigmoid_params(const std::vector<double>& x, const std::vector<double>& y, Eigen::VectorXd start) {
  numeric::ResidualFunction f = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const auto n = static_cast<Eigen::Index>(x.size());
    r.resize(n);
    if (jac) jac->resize(n, 4);
    const double alpha = std::exp(p(1));
    const double gamma = -std::exp(p(3));
    for (Eigen::Index i = 0; i < n; ++i) {
      double e = 0.0;
      const double xi = x[static_cast<std::size_t>(i)];
      r(i) = sigmoid_value(p, xi, &e) - y[static_cast<std::size_t>(i)];
      if (jac) {
        const double d = 1.0 + e;
        const double de = -alpha * e / (d * d);
        (*jac)(i, 0) = 1.0;
        (*jac)(i, 1) = alpha / d;
        (*jac)(i, 2) = de;
        (*jac)(i, 3) = de * xi * gamma;
      }
    }
  };
  numeric::LmOptions options;
  options.max_iterations = 500;
  return numeric::levenberg_marquardt(f, std::move(start), options).params;
}

double sse_for_shift(const Isotherm& iso, const Sigmoid& s, double shift) {
  double sse = 0.0;
  for (std::size_t i = 0; i < iso.x.size(); ++i) {
    const double r = s.log_modulus(iso.x[i] + shift) - iso.y[i];
    sse += r * r;
  }
  return sse;
}

std::size_t reference_index(const std::vector<Isotherm>& isotherms, double reference_temperature) {
  for (std::size_t i = 0; i < isotherms.size(); ++i) {
    if (std::abs(isotherms[i].temperature - reference_temperature) <= kTemperatureMatch) return i;
  }
  fail(ErrorKind::InvalidArgument,
       "reference temperature " + std::to_string(reference_temperature) + " C is not a data temperature");
}

}  // namespace

double Sigmoid::log_modulus(double x) const {
  const double e = std::exp(std::min(700.0, beta + gamma * x));
  return delta + alpha / (1.0 + e);
}

double MasterCurve::shift_at(double temperature) const {
  require(!shift_factors.empty(), ErrorKind::InvalidArgument, "master curve has no shift factors");
  auto hi = shift_factors.lower_bound(temperature - kTemperatureMatch);
  if (hi == shift_factors.end()) return std::prev(hi)->second;
  if (std::abs(hi->first - temperature) <= kTemperatureMatch || hi == shift_factors.begin()) return hi->second;
  auto lo = std::prev(hi);
  const double w = (temperature - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

double MasterCurve::modulus(double temperature, double frequency) const {
  require(frequency > 0.0, ErrorKind::InvalidArgument, "frequency must be positive");
  return std::pow(10.0, sigmoid.log_modulus(std::log10(frequency) + shift_at(temperature)));
}

Sigmoid fit_sigmoid(const std::vector<double>& log_frequency, const std::vector<double>& log_modulus) {
  require(log_frequency.size() == log_modulus.size(), ErrorKind::InvalidArgument, "sigmoid data lengths differ");
  require(log_frequency.size() >= 4, ErrorKind::InsufficientData, "sigmoid fit needs at least 4 points");
  return unpack(fit_sigmoid_params(log_frequency, log_modulus, initial_sigmoid(log_frequency, log_modulus)));
}

ShiftFactors fit_shift_factors(const std::vector<ComplexModulusRecord>& records, double reference_temperature,
                               const ShiftOptions& options) {
  require(!records.empty(), ErrorKind::InsufficientData, "no modulus records");
  const auto isotherms = group_isotherms(records);
  for (const auto& iso : isotherms) {
    require(iso.x.size() >= 2, ErrorKind::InsufficientData,
            "temperature " + std::to_string(iso.temperature) + " C has fewer than 2 frequencies");
  }
  if (isotherms.size() == 1) return {{isotherms.front().temperature, 0.0}};
  const std::size_t ref = reference_index(isotherms, reference_temperature);

  // Pairwise alignment, walking outwards from the reference isotherm.
  std::vector<double> shift(isotherms.size(), 0.0);
  auto align = [&](std::size_t k, std::size_t neighbour) {
    const auto& nb = isotherms[neighbour];
    std::vector<double> nx(nb.x);
    for (double& v : nx) v += shift[neighbour];
    auto misfit = [&](double d) {
      double sse = 0.0;
      for (std::size_t i = 0; i < isotherms[k].x.size(); ++i) {
        const double r = isotherms[k].y[i] - interpolate(nx, nb.y, isotherms[k].x[i] + d);
        sse += r * r;
      }
      return sse;
    };
    shift[k] = numeric::scan_then_refine(misfit, -20.0, 20.0, 801, 1e-9).x;
  };
  for (std::size_t k = ref + 1; k < isotherms.size(); ++k) align(k, k - 1);
  for (std::size_t k = ref; k-- > 0;) align(k, k + 1);

  // Alternate between the pooled sigmoid fit and per-isotherm shifts.
  Eigen::VectorXd params;
  for (int outer = 0; outer < options.max_outer_iterations; ++outer) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t k = 0; k < isotherms.size(); ++k) {
      for (std::size_t i = 0; i < isotherms[k].x.size(); ++i) {
        x.push_back(isotherms[k].x[i] + shift[k]);
        y.push_back(isotherms[k].y[i]);
      }
    }
    params = fit_sigmoid_params(x, y, outer == 0 ? initial_sigmoid(x, y) : params);
    const Sigmoid s = unpack(params);
    double moved = 0.0;
    for (std::size_t k = 0; k < isotherms.size(); ++k) {
      if (k == ref) continue;
      const auto best = numeric::scan_then_refine([&](double d) { return sse_for_shift(isotherms[k], s, d); },
                                                  shift[k] - 2.0, shift[k] + 2.0, 81, 1e-10);
      moved = std::max(moved, std::abs(best.x - shift[k]));
      shift[k] = best.x;
    }
    if (moved < options.shift_tolerance) break;
  }

  ShiftFactors out;
  for (std::size_t k = 0; k < isotherms.size(); ++k) out[isotherms[k].temperature] = k == ref ? 0.0 : shift[k];
  return out;
}

MasterCurve build_master_curve(const std::vector<ComplexModulusRecord>& records, double reference_temperature,
                               const ShiftOptions& options) {
  MasterCurve curve;
  curve.reference_temperature = reference_temperature;
  curve.shift_factors = fit_shift_factors(records, reference_temperature, options);
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& r : records) {
    x.push_back(std::log10(r.frequency) + curve.shift_at(r.temperature));
    y.push_back(std::log10(r.magnitude));
  }
  curve.sigmoid = fit_sigmoid(x, y);
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = curve.sigmoid.log_modulus(x[i]) - y[i];
    sse += r * r;
  }
  curve.log_rms = std::sqrt(sse / static_cast<double>(x.size()));
  return curve;
}

std::vector<ComplexModulusRecord> shift_to_reference(const std::vector<ComplexModulusRecord>& records,
                                                     const ShiftFactors& shifts, double reference_temperature) {
  std::vector<ComplexModulusRecord> out;
  out.reserve(records.size());
  for (auto r : records) {
    auto it = std::find_if(shifts.begin(), shifts.end(), [&](const auto& kv) {
      return std::abs(kv.first - r.temperature) <= kTemperatureMatch;
    });
    require(it != shifts.end(), ErrorKind::InvalidArgument,
            "no shift factor for " + std::to_string(r.temperature) + " C");
    r.frequency *= std::pow(10.0, it->second);
    r.temperature = reference_temperature;
    out.push_back(r);
  }
  return out;
}

nlohmann::json to_json(const MasterCurve& curve) {
  nlohmann::json shifts = nlohmann::json::array();
  for (const auto& [t, s] : curve.shift_factors) shifts.push_back({{"temperature_C", t}, {"log10_shift", s}});
  return {{"reference_temperature_C", curve.reference_temperature},
          {"form", "log10|M| = delta + alpha / (1 + exp(beta + gamma * log10(f_r / Hz)))"},
          {"modulus_unit", "MPa"},
          {"sigmoid",
           {{"delta", curve.sigmoid.delta},
            {"alpha", curve.sigmoid.alpha},
            {"beta", curve.sigmoid.beta},
            {"gamma", curve.sigmoid.gamma}}},
          {"shift_factors", shifts},
          {"log_rms", curve.log_rms}};
}

}  // namespace idt::material
