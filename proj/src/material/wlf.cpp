#include <cmath>
#include <string>

#include "idt/error.hpp"
#include "idt/material.hpp"
#include "idt/numeric/scalar_minimize.hpp"

namespace idt::material {

void WlfParameters::validate() const {
  require(std::isfinite(c1), ErrorKind::InvalidArgument, "C1 must be finite");
  require(c2 > 0.0 && std::isfinite(c2), ErrorKind::InvalidArgument, "C2 must be positive");
  require(std::isfinite(reference_temperature), ErrorKind::InvalidArgument, "reference temperature must be finite");
}

double wlf_shift(const WlfParameters& params, double temperature) {
  params.validate();
  const double dt = temperature - params.reference_temperature;
  const double denominator = params.c2 + dt;
  if (std::abs(denominator) <= 1e-9 * std::max(1.0, params.c2)) {
    fail(ErrorKind::SingularTemperature, "temperature " + std::to_string(temperature) + " C is at the WLF pole");
  }
  return params.c1 * dt / denominator;
}

WlfFit fit_wlf(const ShiftFactors& shifts, double reference_temperature) {
  std::vector<double> dt;
  std::vector<double> s;
  for (const auto& [t, shift] : shifts) {
    if (std::abs(t - reference_temperature) < 1e-12 || !std::isfinite(shift)) continue;
    dt.push_back(t - reference_temperature);
    s.push_back(shift);
  }
  require(dt.size() >= 2, ErrorKind::InsufficientData, "WLF fit needs at least 2 non-reference temperatures");

  // C2 must exceed every Ts - T so the pole stays outside the data.
  double lower = 0.0;
  for (double x : dt) lower = std::max(lower, -x);

  // For fixed C2 the model is linear in C1.
  auto solve_c1 = [&](double c2, double* sse) {
    double hh = 0.0;
    double hs = 0.0;
    for (std::size_t i = 0; i < dt.size(); ++i) {
      const double h = dt[i] / (c2 + dt[i]);
      hh += h * h;
      hs += h * s[i];
    }
    const double c1 = hh > 0.0 ? hs / hh : 0.0;
    if (sse) {
      *sse = 0.0;
      for (std::size_t i = 0; i < dt.size(); ++i) {
        const double r = s[i] - c1 * dt[i] / (c2 + dt[i]);
        *sse += r * r;
      }
    }
    return c1;
  };
  // Search C2 = lower + exp(u).
  auto objective = [&](double u) {
    double sse = 0.0;
    solve_c1(lower + std::exp(u), &sse);
    return sse;
  };
  const auto best = numeric::scan_then_refine(objective, std::log(1e-3), std::log(1e5), 400, 1e-12);
  const double c2 = lower + std::exp(best.x);
  double sse = 0.0;
  const double c1 = solve_c1(c2, &sse);
  WlfFit fit;
  fit.params = {c1, c2, reference_temperature};
  fit.rms_residual = std::sqrt(sse / static_cast<double>(dt.size()));
  return fit;
}

nlohmann::json to_json(const WlfParameters& params) {
  return {{"c1", params.c1}, {"c2_C", params.c2}, {"reference_temperature_C", params.reference_temperature}};
}

WlfParameters wlf_from_json(const nlohmann::json& j) {
  WlfParameters p{j.at("c1").get<double>(), j.at("c2_C").get<double>(), j.at("reference_temperature_C").get<double>()};
  p.validate();
  return p;
}

}  // namespace idt::material
