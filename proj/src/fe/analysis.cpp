#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "idt/error.hpp"
#include "idt/fe.hpp"

namespace idt::fe {
namespace {

std::string format_strains(const StrainAmplitudes& s) {
  std::ostringstream out;
  out << "horizontal " << s.horizontal << " ue, vertical " << s.vertical << " ue";
  return out.str();
}

bool in_window(const StrainAmplitudes& s, const TuningWindow& w, double upper) {
  return s.horizontal >= w.horizontal_min && s.horizontal <= upper && s.vertical <= w.vertical_max;
}

}  // namespace

material::ComplexModulusRecord extract_complex_modulus(const HarmonicFEResult& result, double poissons_ratio) {
  if (!(result.e11_amplitude > 1e-15) || !std::isfinite(result.e11_amplitude)) {
    fail(ErrorKind::DegenerateStrain, "horizontal strain amplitude at the centre vanishes");
  }
  const auto s11 = std::polar(result.s11_amplitude, result.s11_phase);
  const auto s22 = std::polar(result.s22_amplitude, result.s22_phase);
  const auto e11 = std::polar(result.e11_amplitude, result.e11_phase);
  const std::complex<double> modulus = (s11 - poissons_ratio * s22) / e11 * 1e-3;  // kPa -> MPa
  material::ComplexModulusRecord record;
  record.temperature = result.temperature;
  record.frequency = result.frequency;
  record.magnitude = std::abs(modulus);
  // Round-off can leave an elastic response a hair below zero.
  record.phase_deg = std::clamp(std::arg(modulus) * 180.0 / std::numbers::pi, 0.0, 90.0);
  return record;
}

TuningResult tune_load_amplitude(const std::function<StrainAmplitudes(double)>& simulate, double initial_kn,
                                 const TuningWindow& window) {
  require(initial_kn > 0.0 && std::isfinite(initial_kn), ErrorKind::InvalidArgument,
          "initial load must be positive");
  require(window.horizontal_min > 0.0 && window.horizontal_min < window.horizontal_max && window.vertical_max > 0.0,
          ErrorKind::InvalidArgument, "invalid tuning window");
  TuningResult result;
  result.load_kn = initial_kn;
  result.strains = simulate(initial_kn);
  result.simulations = 1;
  for (;;) {
    const auto& s = result.strains;
    if (!(s.horizontal > 0.0) || !std::isfinite(s.horizontal) || !std::isfinite(s.vertical)) {
      fail(ErrorKind::DegenerateStrain, "simulation gave no horizontal strain");
    }
    // Both strains scale with the load, so the window on the horizontal strain
    // shrinks to what keeps the vertical strain under its cap.
    const double ratio = std::abs(s.vertical) / s.horizontal;
    const double upper = ratio > 0.0 ? std::min(window.horizontal_max, window.vertical_max / ratio)
                                     : window.horizontal_max;
    if (upper < window.horizontal_min) {
      fail(ErrorKind::TuningConflict,
           "no load satisfies both strain limits (" + format_strains(s) + " at " + std::to_string(result.load_kn) +
               " kN; the vertical cap allows at most " + std::to_string(upper) + " ue horizontal)");
    }
    if (in_window(s, window, upper)) return result;
    if (result.simulations >= 3) {
      fail(ErrorKind::TuningConflict, "load tuning did not reach the window in 3 simulations (" + format_strains(s) + ")");
    }
    const double target =
        window.horizontal_target < upper ? window.horizontal_target : 0.5 * (window.horizontal_min + upper);
    result.load_kn *= target / s.horizontal;
    result.strains = simulate(result.load_kn);
    ++result.simulations;
  }
}

TuningResult tune_load_amplitude(const Mesh& mesh, const ViscoelasticMaterial& material,
                                 const hondros::IdtGeometry& geometry, double frequency, double temperature,
                                 double initial_kn, const SolverSettings& settings, const TuningWindow& window) {
  return tune_load_amplitude(
      [&](double load) {
        const auto r = simulate_harmonic(mesh, material, geometry.strip_half_angle, geometry.gage_length, frequency,
                                         temperature, load, settings);
        return StrainAmplitudes{r.e11_amplitude * 1e6, r.e22_amplitude * 1e6};
      },
      initial_kn, window);
}

ConvergenceReport mesh_convergence_study(const ViscoelasticMaterial& material, const hondros::IdtGeometry& geometry,
                                         const std::vector<double>& frequencies, std::vector<double> sizes,
                                         double temperature, const SolverSettings& settings) {
  geometry.validate();
  require(!frequencies.empty(), ErrorKind::InvalidArgument, "no frequencies given");
  ConvergenceReport report;
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  const auto unique_end = std::unique(sizes.begin(), sizes.end());
  if (unique_end != sizes.end()) {
    report.warnings.push_back("duplicate mesh sizes were collapsed");
    sizes.erase(unique_end, sizes.end());
  }
  require(sizes.size() >= 2, ErrorKind::InvalidArgument, "a convergence study needs at least two mesh sizes");

  const bool elastic = material.shear_prony.terms.empty();
  const double load_kn = 1.0;
  const double pressure = load_kn * 1e3 / (geometry.strip_width * geometry.thickness);  // MPa
  const double alpha = geometry.strip_half_angle;
  const double hondros_s11 = 2.0 * pressure / std::numbers::pi * (std::sin(2.0 * alpha) - alpha) * 1e3;  // kPa

  std::vector<Mesh> meshes;
  for (double h : sizes) meshes.push_back(build_mesh(geometry.diameter, geometry.thickness, h));

  for (double f : frequencies) {
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const auto r = simulate_harmonic(meshes[i], material, alpha, geometry.gage_length, f, temperature, load_kn, settings);
      const auto e = extract_complex_modulus(r, material.poissons_ratio);
      ConvergenceRow row;
      row.size = sizes[i];
      row.element_count = r.element_count;
      row.frequency = f;
      row.modulus = e.magnitude;
      row.phase_deg = *e.phase_deg;
      row.u1 = r.u1_amplitude;
      row.s11 = r.s11_amplitude;
      if (elastic) {
        row.analytic_error = std::abs(e.magnitude / material.instantaneous_youngs_modulus - 1.0);
        row.hondros_s11_error = std::abs(r.s11_amplitude / hondros_s11 - 1.0);
      }
      rows.push_back(row);
    }
    const auto& finest = rows.back();
    for (auto& row : rows) {
      row.relative_error = std::abs(row.modulus / finest.modulus - 1.0);
      row.u1_relative_error = std::abs(row.u1 / finest.u1 - 1.0);
    }
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
      if (rows[i].relative_error > rows[i - 1].relative_error + 0.005) {
        std::ostringstream out;
        out << "modulus error grows from " << rows[i - 1].size << " mm to " << rows[i].size << " mm at " << f << " Hz";
        report.warnings.push_back(out.str());
      }
    }
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

Prediction predict_dynamic_modulus(const ViscoelasticMaterial& material, const hondros::IdtGeometry& geometry,
                                   const std::vector<double>& frequencies, const std::vector<double>& temperatures,
                                   const PredictionOptions& options) {
  material.validate();
  geometry.validate();
  const Mesh mesh = build_mesh(geometry.diameter, geometry.thickness, options.mesh_size);
  Prediction out;
  for (double t : temperatures) {
    for (double f : frequencies) {
      try {
        // The model is linear, so one run at the initial load gives the
        // response at every other load.
        const auto base = simulate_harmonic(mesh, material, geometry.strip_half_angle, geometry.gage_length, f, t,
                                            options.initial_load_kn, options.solver);
        auto strains_at = [&](double load) {
          const auto r = base.scaled(load / options.initial_load_kn);
          return StrainAmplitudes{r.e11_amplitude * 1e6, r.e22_amplitude * 1e6};
        };
        double load = 0.0;
        try {
          load = tune_load_amplitude(strains_at, options.initial_load_kn, options.window).load_kn;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::TuningConflict) throw;
          load = options.initial_load_kn * options.window.horizontal_target / (base.e11_amplitude * 1e6);
          std::ostringstream note;
          note << "T=" << t << " C, f=" << f << " Hz: " << e.what() << "; using the horizontal target instead";
          out.notes.push_back(note.str());
        }
        const auto r = base.scaled(load / options.initial_load_kn);
        if (!r.steady) {
          std::ostringstream note;
          note << "T=" << t << " C, f=" << f << " Hz: response drift " << r.drift << " exceeds the tolerance";
          out.notes.push_back(note.str());
        }
        auto record = extract_complex_modulus(r, material.poissons_ratio);
        record.temperature = t;
        record.frequency = f;
        out.records.push_back(record);
        out.loads_kn.push_back(load);
      } catch (const Error& e) {
        out.failures.push_back({t, f, e.what()});
      }
    }
  }
  return out;
}

}  // namespace idt::fe
