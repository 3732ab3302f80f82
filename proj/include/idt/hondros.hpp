#pragma once

// Hondros strip-load solution for the indirect tension disk: the stress
// kernels along the loaded (vertical) and horizontal diameters, their
// gage-length integrals (the geometric coefficients) and the dynamic modulus
// inversion from measured displacement amplitudes.

#include <array>

namespace idt::hondros {

/// Strip half-angle calibrated so the 152.4 mm / 65 mm geometry reproduces the
/// tabulated coefficients (minimax fit, max abs error 1.1e-4).
inline constexpr double kCalibratedStripHalfAngle = 0.12394;  // rad, about 7.10 deg

/// Coefficients are integrals over dimensional y with lengths in metres.
inline constexpr double kCoefficientLengthScale = 1e-3;  // mm -> m

struct IdtGeometry {
  double diameter = 0.0;          // mm
  double thickness = 0.0;         // mm
  double gage_length = 0.0;       // mm
  double strip_half_angle = 0.0;  // rad
  double strip_width = 0.0;       // mm, chord 2 R sin(alpha)

  double radius() const { return 0.5 * diameter; }
  double half_gage() const { return 0.5 * gage_length; }

  static IdtGeometry from_half_angle(double diameter, double thickness, double gage_length, double alpha);
  static IdtGeometry from_strip_width(double diameter, double thickness, double gage_length, double strip_width);

  /// Throws InvalidArgument when a field or the width/angle relation is violated.
  void validate() const;
};

/// 152.4 mm diameter, 38.1 mm thick, 65 mm gage, calibrated strip angle.
IdtGeometry standard_geometry();

struct GeometricCoefficients {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  double determinant() const { return beta1 * gamma2 - beta2 * gamma1; }
  std::array<double, 4> as_array() const { return {beta1, beta2, gamma1, gamma2}; }
};

// Kernels in the normalized coordinate u = y/R (or x/R); |u| < 1.
double kernel_n(double y_over_r, double alpha);
double kernel_m(double y_over_r, double alpha);
double kernel_f(double x_over_r, double alpha);
double kernel_g(double x_over_r, double alpha);

/// beta1 = N + M, beta2 = N - M, gamma1 = F - G, gamma2 = F + G, where N, M, F, G
/// integrate the kernels over [-l, l] (l = half gage).  beta1 is reported with
/// vertical compression positive.  Adaptive Gauss–Legendre with
/// `quadrature_order` points per panel.
GeometricCoefficients geometric_coefficients(const IdtGeometry& geom, int quadrature_order = 32);

/// |E*| in MPa from the load amplitude (kN) and vertical/horizontal
/// displacement amplitudes (mm):
///   2 |P0| (b1 g2 - b2 g1) / (pi a d (g2 |V0| - b2 |U0|))
/// with a = strip width and d = thickness, evaluated in SI units.
double idt_dynamic_modulus(const IdtGeometry& geom, const GeometricCoefficients& coeffs, double load_amplitude_kn,
                           double v0_mm, double u0_mm);

/// Elastic plane-stress field on the two axes for a strip pressure p (any
/// stress unit): returns {sigma_xx, sigma_yy}.
struct AxisStress {
  double sxx = 0.0;
  double syy = 0.0;
};
AxisStress stress_on_horizontal_axis(double x_over_r, double alpha, double pressure);
AxisStress stress_on_vertical_axis(double y_over_r, double alpha, double pressure);

/// Minimax calibration of the strip half-angle against target coefficients
/// over [lo, hi] (golden-section search).
struct Calibration {
  double alpha = 0.0;
  double max_abs_error = 0.0;
};
Calibration calibrate_strip_half_angle(const GeometricCoefficients& target, double diameter, double gage_length,
                                       double lo, double hi);

}  // namespace idt::hondros
