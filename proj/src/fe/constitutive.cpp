#include "constitutive.hpp"

#include <algorithm>
#include <cmath>

#include "idt/error.hpp"
#include "idt/simd/kernels.hpp"

namespace idt::fe {

ViscoelasticMaterial ViscoelasticMaterial::elastic(double youngs_modulus, double poissons_ratio) {
  ViscoelasticMaterial m;
  m.instantaneous_youngs_modulus = youngs_modulus;
  m.poissons_ratio = poissons_ratio;
  m.shear_prony = material::PronySeries::elastic(1.0);
  m.validate();
  return m;
}

void ViscoelasticMaterial::validate() const {
  require(instantaneous_youngs_modulus > 0.0 && std::isfinite(instantaneous_youngs_modulus),
          ErrorKind::InvalidArgument, "Young's modulus must be positive");
  require(poissons_ratio > 0.0 && poissons_ratio < 0.5, ErrorKind::InvalidArgument,
          "Poisson's ratio must lie in (0, 0.5)");
  shear_prony.validate();
  wlf.validate();
}

double ViscoelasticMaterial::log_shift(double temperature) const { return material::wlf_shift(wlf, temperature); }

std::complex<double> proportional_complex_modulus(const ViscoelasticMaterial& material, double frequency,
                                                  double temperature) {
  material.validate();
  const double omega = 2.0 * std::numbers::pi * frequency * std::pow(10.0, material.log_shift(temperature));
  std::complex<double> psi = 1.0 - material.shear_prony.sum_g();
  for (const auto& t : material.shear_prony.terms) {
    const std::complex<double> iwt(0.0, omega * t.tau);
    psi += t.g * iwt / (1.0 + iwt);
  }
  return material.instantaneous_youngs_modulus * psi;
}

namespace detail {

Eigen::Matrix3d plane_stress_matrix(double e, double nu) {
  Eigen::Matrix3d d;
  const double c = e / (1.0 - nu * nu);
  d << c, c * nu, 0.0, c * nu, c, 0.0, 0.0, 0.0, c * (1.0 - nu) / 2.0;
  return d;
}

Constitutive::Constitutive(const ViscoelasticMaterial& material, std::size_t points, double reduced_step)
    : mode_(material.volumetric), n_(points) {
  material.validate();
  require(reduced_step > 0.0 && std::isfinite(reduced_step), ErrorKind::InvalidArgument,
          "reduced time step must be positive");
  for (const auto& t : material.shear_prony.terms) {
    const double x = reduced_step / t.tau;
    g_.push_back(t.g);
    decay_.push_back(std::exp(-x));
    gain_.push_back(t.g * -std::expm1(-x) / x);
    gain_sum_ += gain_.back();
  }
  const double g_inf = 1.0 - material.shear_prony.sum_g();
  const double relax = g_inf + gain_sum_;
  const double e0 = material.instantaneous_youngs_modulus;
  const double nu = material.poissons_ratio;
  const std::size_t components = mode_ == VolumetricResponse::Proportional ? 3 : 4;

  if (mode_ == VolumetricResponse::Proportional) {
    elastic_ = plane_stress_matrix(e0, nu);
    tangent_ = relax * elastic_;
  } else {
    bulk_ = e0 / (3.0 * (1.0 - 2.0 * nu));
    shear0_ = e0 / (2.0 * (1.0 + nu));
    shear_alg_ = relax * shear0_;
    const double k = bulk_;
    const double g = shear_alg_;
    const double e_alg = 9.0 * k * g / (3.0 * k + g);
    const double nu_alg = (3.0 * k - 2.0 * g) / (2.0 * (3.0 * k + g));
    tangent_ = plane_stress_matrix(e_alg, nu_alg);
    combined_.assign(4 * n_, 0.0);
  }
  strain_.assign(components * n_, 0.0);
  history_.assign(g_.size(), std::vector<double>(components * n_, 0.0));
  work_.assign(components * n_, 0.0);
}

void Constitutive::history_stress(std::vector<double>& stress) {
  stress.assign(3 * n_, 0.0);
  if (mode_ == VolumetricResponse::Proportional) {
    proportional_history(stress);
  } else {
    bulk_history(stress);
  }
}

// sigma_h = C0 (sum_i d_i h_i - sum_i gain_i eps_n)
void Constitutive::proportional_history(std::vector<double>& stress) {
  if (g_.empty()) return;
  const auto& k = simd::active();
  std::fill(work_.begin(), work_.end(), 0.0);
  k.axpby(-gain_sum_, strain_.data(), 0.0, work_.data(), work_.size());
  for (std::size_t i = 0; i < g_.size(); ++i) k.axpby(decay_[i], history_[i].data(), 1.0, work_.data(), work_.size());
  const double* z0 = work_.data();
  const double* z1 = z0 + n_;
  const double* z2 = z1 + n_;
  double* s0 = stress.data();
  double* s1 = s0 + n_;
  double* s2 = s1 + n_;
  const Eigen::Matrix3d& c = elastic_;
  for (std::size_t p = 0; p < n_; ++p) {
    s0[p] = c(0, 0) * z0[p] + c(0, 1) * z1[p];
    s1[p] = c(1, 0) * z0[p] + c(1, 1) * z1[p];
    s2[p] = c(2, 2) * z2[p];
  }
}

// Deviatoric history with the out-of-plane strain condensed so that s33 = 0.
void Constitutive::bulk_history(std::vector<double>& stress) {
  const auto& k = simd::active();
  std::fill(combined_.begin(), combined_.end(), 0.0);
  if (!g_.empty()) {
    k.axpby(-gain_sum_, strain_.data(), 0.0, combined_.data(), combined_.size());
    for (std::size_t i = 0; i < g_.size(); ++i) {
      k.axpby(decay_[i], history_[i].data(), 1.0, combined_.data(), combined_.size());
    }
  }
  const double lame = bulk_ - 2.0 * shear_alg_ / 3.0;
  const double condensed = bulk_ + 4.0 * shear_alg_ / 3.0;
  const double* h11 = combined_.data();
  const double* h22 = h11 + n_;
  const double* h33 = h22 + n_;
  const double* h12 = h33 + n_;
  for (std::size_t p = 0; p < n_; ++p) {
    const double e33 = -2.0 * shear0_ * h33[p] / condensed;
    stress[p] = lame * e33 + 2.0 * shear0_ * h11[p];
    stress[n_ + p] = lame * e33 + 2.0 * shear0_ * h22[p];
    stress[2 * n_ + p] = shear0_ * h12[p];
  }
}

void Constitutive::advance(const std::vector<double>& strain) {
  require(strain.size() == 3 * n_, ErrorKind::InvalidArgument, "strain array has the wrong size");
  const auto& k = simd::active();
  if (mode_ == VolumetricResponse::Proportional) {
    if (!g_.empty()) {
      work_ = strain;
      k.axpby(-1.0, strain_.data(), 1.0, work_.data(), work_.size());  // increment
      for (std::size_t i = 0; i < g_.size(); ++i) {
        k.axpby(gain_[i], work_.data(), decay_[i], history_[i].data(), work_.size());
      }
    }
    strain_ = strain;
    return;
  }

  const double lame = bulk_ - 2.0 * shear_alg_ / 3.0;
  const double condensed = bulk_ + 4.0 * shear_alg_ / 3.0;
  for (std::size_t p = 0; p < n_; ++p) {
    const double e11 = strain[p];
    const double e22 = strain[n_ + p];
    const double e33 = -(lame * (e11 + e22) + 2.0 * shear0_ * combined_[2 * n_ + p]) / condensed;
    const double mean = (e11 + e22 + e33) / 3.0;
    work_[p] = e11 - mean;
    work_[n_ + p] = e22 - mean;
    work_[2 * n_ + p] = e33 - mean;
    work_[3 * n_ + p] = strain[2 * n_ + p];
  }
  if (!g_.empty()) {
    std::vector<double> increment = work_;
    k.axpby(-1.0, strain_.data(), 1.0, increment.data(), increment.size());
    for (std::size_t i = 0; i < g_.size(); ++i) {
      k.axpby(gain_[i], increment.data(), decay_[i], history_[i].data(), increment.size());
    }
  }
  strain_ = work_;
}

}  // namespace detail
}  // namespace idt::fe
