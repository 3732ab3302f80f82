#pragma once

// Plane-stress finite-element model of the strip-loaded IDT disk with a
// Prony-series viscoelastic material, driven by a sinusoidal strip load.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "idt/hondros.hpp"
#include "idt/material.hpp"
#include "json.hpp"

namespace idt::fe {

struct Mesh {
  std::vector<Eigen::Vector2d> nodes;         // mm
  std::vector<std::array<int, 4>> elements;   // counter-clockwise
  std::vector<int> boundary;                  // rim nodes, counter-clockwise
  double diameter = 0.0;                      // mm
  double thickness = 0.0;                     // mm
  double target_size = 0.0;                   // mm
  double characteristic_size = 0.0;           // sqrt(mean element area), mm

  double radius() const { return 0.5 * diameter; }
  std::size_t element_count() const { return elements.size(); }
};

/// O-grid quad mesh of the disk: a central square surrounded by four mapped
/// blocks whose outer edges lie on the rim.  Throws MeshError unless
/// 0 < target_size < diameter / 4 or when an element is inverted.
Mesh build_mesh(double diameter, double thickness, double target_size);

/// Smallest Jacobian determinant over all 2x2 Gauss points.
double min_jacobian(const Mesh& mesh);

/// How the relaxation acts on the isotropic stiffness.
enum class VolumetricResponse {
  /// The whole stiffness relaxes with the normalized Prony function and
  /// Poisson's ratio stays constant.
  Proportional,
  /// Only the deviatoric part relaxes; the bulk modulus is elastic.
  ElasticBulk,
};

struct ViscoelasticMaterial {
  double instantaneous_youngs_modulus = 0.0;  // MPa
  double poissons_ratio = 0.25;
  material::PronySeries shear_prony;  // only g_i and tau_i are used
  material::WlfParameters wlf{-17.44, 51.6, 17.1};
  VolumetricResponse volumetric = VolumetricResponse::Proportional;

  static ViscoelasticMaterial elastic(double youngs_modulus, double poissons_ratio = 0.25);
  void validate() const;

  /// log10 a_T at `temperature` (SingularTemperature at the WLF pole).
  double log_shift(double temperature) const;
};

/// Closed-form complex Young's modulus of the Proportional model at
/// (frequency, temperature): E0 (g_inf + sum g_i i w tau_i / (1 + i w tau_i)),
/// w = 2 pi f a_T.
std::complex<double> proportional_complex_modulus(const ViscoelasticMaterial& material, double frequency,
                                                  double temperature);

struct SolverSettings {
  int steps_per_cycle = 64;
  int n_cycles = 10;
  int reduction_cycles = 5;
  double drift_tolerance = 0.005;
  double reaction_tolerance = 1e-8;  // relative to the load amplitude
  bool keep_histories = false;
};

struct ProbeHistory {
  std::vector<double> time;  // s
  std::vector<double> load;  // kN
  std::vector<double> s11;   // kPa
  std::vector<double> s22;   // kPa
  std::vector<double> e11;
  std::vector<double> e22;
  std::vector<double> u1;  // mm, horizontal gage extension
  std::vector<double> u2;  // mm, vertical gage extension
};

/// Amplitudes of the last `reduction_cycles` cycles.  Phases are phasor angles
/// theta of A sin(w t + theta) with the load at phase 0, in [0, 2 pi).
struct HarmonicFEResult {
  double frequency = 0.0;    // Hz
  double temperature = 0.0;  // C
  double applied_load_amplitude = 0.0;  // kN
  double s11_amplitude = 0.0, s11_phase = 0.0;  // kPa, centre
  double s22_amplitude = 0.0, s22_phase = 0.0;  // kPa, centre
  double e11_amplitude = 0.0, e11_phase = 0.0;  // centre
  double e22_amplitude = 0.0, e22_phase = 0.0;  // centre
  double u1_amplitude = 0.0, u1_phase = 0.0;    // mm, extension between (+-l, 0)
  double u2_amplitude = 0.0, u2_phase = 0.0;    // mm, extension between (0, +-l)
  double drift = 0.0;  // relative e11 amplitude change over the last two cycles
  bool steady = true;  // drift below the tolerance
  double max_reaction_error = 0.0;  // relative to the load amplitude
  std::size_t element_count = 0;
  std::optional<ProbeHistory> history;

  /// The same response at load amplitude * factor (the model is linear and
  /// starts from rest).
  HarmonicFEResult scaled(double factor) const;
};

/// Time-steps the hereditary Prony update (exponential integrator, strain
/// linear within a step) with the bottom strip arc fixed in both directions
/// and a uniform normal pressure on the top strip arc.  The half gage length
/// for the U1/U2 probes comes from `gage_length`.
HarmonicFEResult simulate_harmonic(const Mesh& mesh, const ViscoelasticMaterial& material, double strip_half_angle,
                                   double gage_length, double frequency, double temperature, double load_amplitude_kn,
                                   const SolverSettings& settings = {});

/// E* = (S11 - nu S22) / E11 from the centre phasors; magnitude in MPa and
/// phase in degrees.  Throws DegenerateStrain when E11 vanishes.
material::ComplexModulusRecord extract_complex_modulus(const HarmonicFEResult& result, double poissons_ratio);

struct StrainAmplitudes {
  double horizontal = 0.0;  // microstrain
  double vertical = 0.0;    // microstrain
};

struct TuningWindow {
  double horizontal_min = 60.0;
  double horizontal_max = 80.0;
  double horizontal_target = 70.0;
  double vertical_max = 100.0;
};

struct TuningResult {
  double load_kn = 0.0;
  StrainAmplitudes strains;
  int simulations = 0;
};

/// Scales the load so that the centre horizontal strain lands in the window
/// while the vertical strain stays below its cap; at most 3 simulations.
/// Throws TuningConflict when no load satisfies both limits.
TuningResult tune_load_amplitude(const std::function<StrainAmplitudes(double)>& simulate, double initial_kn,
                                 const TuningWindow& window = {});

/// Convenience overload running the FE model for each trial load.
TuningResult tune_load_amplitude(const Mesh& mesh, const ViscoelasticMaterial& material,
                                 const hondros::IdtGeometry& geometry, double frequency, double temperature,
                                 double initial_kn, const SolverSettings& settings = {},
                                 const TuningWindow& window = {});

struct ConvergenceRow {
  double size = 0.0;  // mm
  std::size_t element_count = 0;
  double frequency = 0.0;
  double modulus = 0.0;    // MPa
  double phase_deg = 0.0;
  double u1 = 0.0;         // mm
  double s11 = 0.0;        // kPa
  double relative_error = 0.0;     // |E*| vs finest mesh
  double u1_relative_error = 0.0;  // U1 vs finest mesh
  std::optional<double> analytic_error;  // |E*| vs E0, elastic material only
  std::optional<double> hondros_s11_error;  // centre S11 vs Hondros, elastic only
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;  // grouped by frequency, coarse to fine
  std::vector<std::string> warnings;
};

/// Runs the model for every (size, frequency); errors are relative to the
/// finest mesh.  Duplicate sizes are collapsed with a warning.
ConvergenceReport mesh_convergence_study(const ViscoelasticMaterial& material, const hondros::IdtGeometry& geometry,
                                         const std::vector<double>& frequencies, std::vector<double> sizes,
                                         double temperature, const SolverSettings& settings = {});

struct PredictionOptions {
  double mesh_size = 5.0;  // mm
  double initial_load_kn = 1.0;
  SolverSettings solver;
  TuningWindow window;
};

struct PointFailure {
  double temperature = 0.0;
  double frequency = 0.0;
  std::string message;
};

struct Prediction {
  std::vector<material::ComplexModulusRecord> records;
  std::vector<double> loads_kn;     // one per record
  std::vector<std::string> notes;   // tuning conflicts and fallbacks
  std::vector<PointFailure> failures;
};

/// For every (T, f): tune the load, simulate and extract E*.  A tuning
/// conflict falls back to the horizontal strain target and is noted; other
/// per-point errors are recorded and the batch continues.
Prediction predict_dynamic_modulus(const ViscoelasticMaterial& material, const hondros::IdtGeometry& geometry,
                                   const std::vector<double>& frequencies, const std::vector<double>& temperatures,
                                   const PredictionOptions& options = {});

void write_mesh_csv(const Mesh& mesh, const std::filesystem::path& nodes_path,
                    const std::filesystem::path& elements_path);
void write_history_csv(const HarmonicFEResult& result, const std::filesystem::path& path);
nlohmann::json run_manifest(const Mesh& mesh, const ViscoelasticMaterial& material,
                            const hondros::IdtGeometry& geometry, const SolverSettings& settings);

}  // namespace idt::fe
