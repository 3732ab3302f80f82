#include <string>

#include "idt/csv.hpp"
#include "idt/error.hpp"
#include "idt/fe.hpp"

namespace idt::fe {

void write_mesh_csv(const Mesh& mesh, const std::filesystem::path& nodes_path,
                    const std::filesystem::path& elements_path) {
  csv::Writer nodes({"node", "x_mm", "y_mm"});
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    nodes.add_row({std::to_string(i), csv::format(mesh.nodes[i].x()), csv::format(mesh.nodes[i].y())});
  }
  nodes.save(nodes_path);
  csv::Writer elements({"element", "n1", "n2", "n3", "n4"});
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& c = mesh.elements[e];
    elements.add_row({std::to_string(e), std::to_string(c[0]), std::to_string(c[1]), std::to_string(c[2]),
                      std::to_string(c[3])});
  }
  elements.save(elements_path);
}

void write_history_csv(const HarmonicFEResult& result, const std::filesystem::path& path) {
  require(result.history.has_value(), ErrorKind::InvalidArgument,
          "result has no probe histories (enable keep_histories)");
  const auto& h = *result.history;
  csv::Writer out({"time_s", "load_kN", "s11_kPa", "s22_kPa", "e11", "e22", "u1_mm", "u2_mm"});
  for (std::size_t i = 0; i < h.time.size(); ++i) {
    out.add_numeric_row({h.time[i], h.load[i], h.s11[i], h.s22[i], h.e11[i], h.e22[i], h.u1[i], h.u2[i]});
  }
  out.save(path);
}

nlohmann::json run_manifest(const Mesh& mesh, const ViscoelasticMaterial& material,
                            const hondros::IdtGeometry& geometry, const SolverSettings& settings) {
  nlohmann::json j;
  j["geometry"] = {{"diameter_mm", geometry.diameter},
                   {"thickness_mm", geometry.thickness},
                   {"gage_length_mm", geometry.gage_length},
                   {"strip_half_angle_rad", geometry.strip_half_angle},
                   {"strip_width_mm", geometry.strip_width}};
  j["mesh"] = {{"target_size_mm", mesh.target_size},
               {"characteristic_size_mm", mesh.characteristic_size},
               {"nodes", mesh.nodes.size()},
               {"elements", mesh.elements.size()}};
  j["material"] = {{"instantaneous_youngs_modulus_MPa", material.instantaneous_youngs_modulus},
                   {"poissons_ratio", material.poissons_ratio},
                   {"volumetric", material.volumetric == VolumetricResponse::Proportional ? "proportional"
                                                                                            : "elastic_bulk"},
                   {"prony", material::to_json(material.shear_prony)},
                   {"wlf", material::to_json(material.wlf)}};
  j["solver"] = {{"steps_per_cycle", settings.steps_per_cycle},
                 {"n_cycles", settings.n_cycles},
                 {"reduction_cycles", settings.reduction_cycles},
                 {"drift_tolerance", settings.drift_tolerance},
                 {"reaction_tolerance", settings.reaction_tolerance}};
  return j;
}

}  // namespace idt::fe
