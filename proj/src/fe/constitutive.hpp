#pragma once

#include <Eigen/Dense>
#include <vector>

#include "idt/fe.hpp"

namespace idt::fe::detail {

Eigen::Matrix3d plane_stress_matrix(double youngs_modulus, double poissons_ratio);

/// Prony history for a set of material points with a fixed reduced time
/// step.  Strains and stresses are stored component-major: entry c * n + p is
/// component c (11, 22, engineering 12) of point p.
///
/// Each step calls history_stress() and then advance() with the new strains;
/// the stress at a point is tangent() * strain + history stress.
class Constitutive {
 public:
  Constitutive(const ViscoelasticMaterial& material, std::size_t points, double reduced_step);

  const Eigen::Matrix3d& tangent() const { return tangent_; }
  std::size_t points() const { return n_; }

  void history_stress(std::vector<double>& stress);
  void advance(const std::vector<double>& strain);

 private:
  void proportional_history(std::vector<double>& stress);
  void bulk_history(std::vector<double>& stress);

  VolumetricResponse mode_;
  std::size_t n_;
  std::vector<double> g_;      // Prony coefficients
  std::vector<double> decay_;  // exp(-dxi / tau_i)
  std::vector<double> gain_;   // g_i tau_i / dxi (1 - exp(-dxi / tau_i))
  double gain_sum_ = 0.0;
  Eigen::Matrix3d tangent_;
  Eigen::Matrix3d elastic_;  // Proportional: instantaneous plane-stress stiffness
  double bulk_ = 0.0;
  double shear0_ = 0.0;
  double shear_alg_ = 0.0;

  std::vector<double> strain_;                // Proportional: 3n in-plane; ElasticBulk: 4n deviatoric
  std::vector<std::vector<double>> history_;  // per term, same layout as strain_
  std::vector<double> work_;
  std::vector<double> combined_;  // ElasticBulk: sum_i d_i H_i - gain_sum e (4n), kept for advance()
};

}  // namespace idt::fe::detail
