#include "idt/hondros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "idt/error.hpp"
#include "idt/numeric/gauss_legendre.hpp"
#include "idt/numeric/scalar_minimize.hpp"

namespace idt::hondros {

namespace {

void check_domain(double u) {
  if (!(std::abs(u) < 1.0)) fail(ErrorKind::OutOfDomain, "kernel argument must satisfy |u| < 1, got " + std::to_string(u));
}

}  // namespace

IdtGeometry IdtGeometry::from_half_angle(double diameter, double thickness, double gage_length, double alpha) {
  IdtGeometry g{diameter, thickness, gage_length, alpha, diameter * std::sin(alpha)};
  g.validate();
  return g;
}

IdtGeometry IdtGeometry::from_strip_width(double diameter, double thickness, double gage_length, double strip_width) {
  require(diameter > 0.0 && strip_width > 0.0 && strip_width < diameter, ErrorKind::InvalidArgument,
          "strip width must lie in (0, diameter)");
  IdtGeometry g{diameter, thickness, gage_length, std::asin(strip_width / diameter), strip_width};
  g.validate();
  return g;
}

void IdtGeometry::validate() const {
  require(diameter > 0.0, ErrorKind::InvalidArgument, "diameter must be positive");
  require(thickness > 0.0, ErrorKind::InvalidArgument, "thickness must be positive");
  require(gage_length > 0.0, ErrorKind::InvalidArgument, "gage length must be positive");
  require(gage_length < diameter, ErrorKind::InvalidArgument, "gage length must be shorter than the diameter");
  require(strip_half_angle > 0.0 && strip_half_angle < std::numbers::pi / 4.0, ErrorKind::InvalidArgument,
          "strip half-angle must lie in (0, pi/4)");
  require(strip_width > 0.0, ErrorKind::InvalidArgument, "strip width must be positive");
  const double expected = diameter * std::sin(strip_half_angle);
  require(std::abs(strip_width - expected) <= 1e-9 * expected, ErrorKind::InvalidArgument,
          "strip width is inconsistent with the strip half-angle");
}

IdtGeometry standard_geometry() {
  return IdtGeometry::from_half_angle(152.4, 38.1, 65.0, kCalibratedStripHalfAngle);
}

double kernel_n(double u, double alpha) {
  check_domain(u);
  const double u2 = u * u;
  return std::atan((1.0 + u2) / (1.0 - u2) * std::tan(alpha));
}

double kernel_m(double u, double alpha) {
  check_domain(u);
  const double u2 = u * u;
  return (1.0 - u2) * std::sin(2.0 * alpha) / (1.0 - 2.0 * u2 * std::cos(2.0 * alpha) + u2 * u2);
}

// Horizontal-diameter kernel: the denominator carries +2u^2 cos(2 alpha).
double kernel_f(double u, double alpha) {
  check_domain(u);
  const double u2 = u * u;
  return (1.0 - u2) * std::sin(2.0 * alpha) / (1.0 + 2.0 * u2 * std::cos(2.0 * alpha) + u2 * u2);
}

double kernel_g(double u, double alpha) {
  check_domain(u);
  const double u2 = u * u;
  return std::atan((1.0 - u2) / (1.0 + u2) * std::tan(alpha));
}

GeometricCoefficients geometric_coefficients(const IdtGeometry& geom, int quadrature_order) {
  geom.validate();
  require(quadrature_order >= 8, ErrorKind::InvalidArgument, "quadrature order must be at least 8");
  const double alpha = geom.strip_half_angle;
  const double c = geom.half_gage() / geom.radius();

  // Kernels are even: integrate [0, c] and double.
  auto integral = [&](double (*kernel)(double, double)) {
    const auto r = numeric::integrate_adaptive([&](double u) { return kernel(u, alpha); }, 0.0, c, quadrature_order);
    return 2.0 * r.value;
  };
  const double scale = geom.radius() * kCoefficientLengthScale;
  const double n = scale * integral(&kernel_n);
  const double m = scale * integral(&kernel_m);
  const double f = scale * integral(&kernel_f);
  const double g = scale * integral(&kernel_g);
  return {n + m, n - m, f - g, f + g};
}

double idt_dynamic_modulus(const IdtGeometry& geom, const GeometricCoefficients& coeffs, double load_amplitude_kn,
                           double v0_mm, double u0_mm) {
  geom.validate();
  require(load_amplitude_kn > 0.0, ErrorKind::InvalidArgument, "load amplitude must be positive");
  require(v0_mm > 0.0 && u0_mm > 0.0, ErrorKind::InvalidArgument, "displacement amplitudes must be positive");
  const double p = std::abs(load_amplitude_kn) * 1e3;  // N
  const double a = geom.strip_width * 1e-3;            // m
  const double d = geom.thickness * 1e-3;              // m
  const double v = std::abs(v0_mm) * 1e-3;
  const double u = std::abs(u0_mm) * 1e-3;
  const double denominator = coeffs.gamma2 * v - coeffs.beta2 * u;
  const double scale = std::abs(coeffs.gamma2 * v) + std::abs(coeffs.beta2 * u);
  if (!(std::abs(denominator) > 1e-12 * scale) || scale == 0.0) {
    fail(ErrorKind::DegenerateDisplacements, "gamma2 V0 - beta2 U0 vanishes");
  }
  const double pascal = 2.0 * p * coeffs.determinant() / (std::numbers::pi * a * d * denominator);
  return pascal * 1e-6;
}

AxisStress stress_on_horizontal_axis(double x_over_r, double alpha, double pressure) {
  const double k = 2.0 * pressure / std::numbers::pi;
  const double f = kernel_f(x_over_r, alpha);
  const double g = kernel_g(x_over_r, alpha);
  return {k * (f - g), -k * (f + g)};
}

AxisStress stress_on_vertical_axis(double y_over_r, double alpha, double pressure) {
  const double k = 2.0 * pressure / std::numbers::pi;
  const double m = kernel_m(y_over_r, alpha);
  const double n = kernel_n(y_over_r, alpha);
  return {k * (m - n), -k * (m + n)};
}

Calibration calibrate_strip_half_angle(const GeometricCoefficients& target, double diameter, double gage_length,
                                       double lo, double hi) {
  auto error = [&](double alpha) {
    const auto c = geometric_coefficients(IdtGeometry::from_half_angle(diameter, 1.0, gage_length, alpha), 16);
    const auto got = c.as_array();
    const auto want = target.as_array();
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    return worst;
  };
  const auto best = numeric::golden_section(error, lo, hi, 1e-10);
  return {best.x, best.value};
}

}  // namespace idt::hondros
