#pragma once

// Viscoelastic characterization: complex-modulus records, WLF shifting,
// Prony series and sigmoidal master curves.

#include <map>
#include <optional>
#include <vector>

#include "json.hpp"

namespace idt::material {

/// One (temperature, frequency) modulus measurement.  Mixture tables often
/// publish magnitudes only, so the phase is optional.
struct ComplexModulusRecord {
  double temperature = 0.0;  // C
  double frequency = 0.0;    // Hz
  double magnitude = 0.0;    // MPa
  std::optional<double> phase_deg;

  /// Throws InvalidArgument when frequency <= 0, magnitude <= 0 or the phase
  /// lies outside [0, 90] degrees.
  void validate() const;
};

/// E' = |E*| cos(phi).  Throws InvalidArgument when the record has no phase.
double storage_modulus(const ComplexModulusRecord& record);
double loss_modulus(const ComplexModulusRecord& record);

struct WlfParameters {
  double c1 = 0.0;
  double c2 = 0.0;  // C, > 0
  double reference_temperature = 17.1;

  void validate() const;
};

/// log10 a_T = C1 (T - Ts) / (C2 + T - Ts).  Throws SingularTemperature near
/// the pole T = Ts - C2.
double wlf_shift(const WlfParameters& params, double temperature);

struct WlfFit {
  WlfParameters params;
  double rms_residual = 0.0;  // log10 units
};

/// Temperature (C) -> log10 a_T.
using ShiftFactors = std::map<double, double>;

/// Least-squares WLF fit with C2 > 0 and no pole inside the data.  C1 is
/// eliminated in closed form for each C2, which is then found by a 1-D search.
WlfFit fit_wlf(const ShiftFactors& shifts, double reference_temperature);

struct PronyTerm {
  double g = 0.0;    // normalized coefficient
  double tau = 0.0;  // s
};

/// G(t) = G0 (1 - sum g_i (1 - exp(-t / tau_i))), G_inf = G0 (1 - sum g_i).
struct PronySeries {
  double instantaneous_modulus = 0.0;
  double long_term_modulus = 0.0;
  std::vector<PronyTerm> terms;

  static PronySeries elastic(double modulus);
  /// Builds a series from absolute term moduli G_i.
  static PronySeries from_moduli(double long_term, const std::vector<double>& moduli, const std::vector<double>& taus);

  double sum_g() const;
  void validate() const;

  double relaxation(double t) const;
  double storage(double omega) const;  // rad/s
  double loss(double omega) const;
  double magnitude(double omega) const;
  double phase(double omega) const;  // rad
};

struct PronyFitOptions {
  double decade_padding = 1.0;
};

/// Relaxation times log-uniform over [1/(2 pi fmax), 1/(2 pi fmin)] padded by
/// one decade each side; term moduli by NNLS on G' and G'' rows, each row
/// weighted by the inverse of its measured component (relative error).  Terms that come out zero are dropped.
PronySeries fit_prony(const std::vector<ComplexModulusRecord>& records, int n_terms,
                      const PronyFitOptions& options = {});

/// log10|M| = delta + alpha / (1 + exp(beta + gamma log10 f_r)), alpha > 0, gamma < 0.
struct Sigmoid {
  double delta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double log_modulus(double log_reduced_frequency) const;
};

struct MasterCurve {
  double reference_temperature = 17.1;
  Sigmoid sigmoid;
  ShiftFactors shift_factors;
  double log_rms = 0.0;

  /// Interpolates the shift at `temperature` when it is not a data temperature
  /// (linear in T between neighbours, constant beyond the ends).
  double shift_at(double temperature) const;
  double modulus(double temperature, double frequency) const;
};

struct ShiftOptions {
  int max_outer_iterations = 50;
  double shift_tolerance = 1e-4;
};

/// Horizontal log-frequency shifts aligning the isotherms.  The reference
/// temperature must be one of the data temperatures; its shift is 0.
ShiftFactors fit_shift_factors(const std::vector<ComplexModulusRecord>& records, double reference_temperature,
                               const ShiftOptions& options = {});

/// Least-squares sigmoid through (log10 f_r, log10 |M|) points.
Sigmoid fit_sigmoid(const std::vector<double>& log_frequency, const std::vector<double>& log_modulus);

MasterCurve build_master_curve(const std::vector<ComplexModulusRecord>& records, double reference_temperature,
                               const ShiftOptions& options = {});

/// Moves records to the reference temperature: frequency becomes f * a_T.
std::vector<ComplexModulusRecord> shift_to_reference(const std::vector<ComplexModulusRecord>& records,
                                                     const ShiftFactors& shifts, double reference_temperature);

nlohmann::json to_json(const PronySeries& series);
nlohmann::json to_json(const WlfParameters& params);
nlohmann::json to_json(const MasterCurve& curve);
PronySeries prony_from_json(const nlohmann::json& j);
WlfParameters wlf_from_json(const nlohmann::json& j);

}  // namespace idt::material
