#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "constitutive.hpp"
#include "idt/error.hpp"
#include "idt/fe.hpp"
#include "idt/signal.hpp"

namespace idt::fe {
namespace {

constexpr double kPi = std::numbers::pi;

using BMatrix = std::array<double, 24>;  // 3 x 8, row-major

struct ShapeDerivatives {
  std::array<double, 4> n{};
  std::array<double, 4> dx{};
  std::array<double, 4> dy{};
  double det = 0.0;
};

ShapeDerivatives shape(const Mesh& mesh, const std::array<int, 4>& e, double xi, double eta) {
  static constexpr double sx[4] = {-1, 1, 1, -1};
  static constexpr double sy[4] = {-1, -1, 1, 1};
  ShapeDerivatives s;
  double dxi[4], deta[4];
  double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
  for (int a = 0; a < 4; ++a) {
    s.n[a] = 0.25 * (1 + sx[a] * xi) * (1 + sy[a] * eta);
    dxi[a] = 0.25 * sx[a] * (1 + sy[a] * eta);
    deta[a] = 0.25 * sy[a] * (1 + sx[a] * xi);
    const auto& p = mesh.nodes[static_cast<std::size_t>(e[a])];
    j00 += dxi[a] * p.x();
    j01 += dxi[a] * p.y();
    j10 += deta[a] * p.x();
    j11 += deta[a] * p.y();
  }
  s.det = j00 * j11 - j01 * j10;
  for (int a = 0; a < 4; ++a) {
    s.dx[a] = (j11 * dxi[a] - j01 * deta[a]) / s.det;
    s.dy[a] = (-j10 * dxi[a] + j00 * deta[a]) / s.det;
  }
  return s;
}

BMatrix strain_operator(const ShapeDerivatives& s) {
  BMatrix b{};
  for (int a = 0; a < 4; ++a) {
    b[0 * 8 + 2 * a] = s.dx[a];
    b[1 * 8 + 2 * a + 1] = s.dy[a];
    b[2 * 8 + 2 * a] = s.dy[a];
    b[2 * 8 + 2 * a + 1] = s.dx[a];
  }
  return b;
}

// Element and local coordinates containing p, found by Newton on the
// isoparametric map.
bool locate_in(const Mesh& mesh, const std::array<int, 4>& e, const Eigen::Vector2d& p, double& xi, double& eta) {
  Eigen::Vector2d lo = mesh.nodes[static_cast<std::size_t>(e[0])], hi = lo;
  for (int a = 1; a < 4; ++a) {
    lo = lo.cwiseMin(mesh.nodes[static_cast<std::size_t>(e[a])]);
    hi = hi.cwiseMax(mesh.nodes[static_cast<std::size_t>(e[a])]);
  }
  const double slack = 1e-9 * mesh.diameter;
  if ((p.array() < lo.array() - slack).any() || (p.array() > hi.array() + slack).any()) return false;
  xi = 0.0;
  eta = 0.0;
  for (int it = 0; it < 50; ++it) {
    static constexpr double sx[4] = {-1, 1, 1, -1};
    static constexpr double sy[4] = {-1, -1, 1, 1};
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    Eigen::Matrix2d j = Eigen::Matrix2d::Zero();
    for (int a = 0; a < 4; ++a) {
      const auto& q = mesh.nodes[static_cast<std::size_t>(e[a])];
      x += 0.25 * (1 + sx[a] * xi) * (1 + sy[a] * eta) * q;
      j.col(0) += 0.25 * sx[a] * (1 + sy[a] * eta) * q;
      j.col(1) += 0.25 * sy[a] * (1 + sx[a] * xi) * q;
    }
    const Eigen::Vector2d step = j.inverse() * (p - x);
    xi += step.x();
    eta += step.y();
    if (step.norm() < 1e-13) break;
  }
  const double tol = 1e-8;
  return std::abs(xi) <= 1 + tol && std::abs(eta) <= 1 + tol;
}

struct PointProbe {
  std::vector<std::size_t> elements;
  std::vector<BMatrix> operators;  // averaged over the containing elements
};

struct DisplacementProbe {
  std::size_t element = 0;
  std::array<double, 4> n{};
};

PointProbe strain_probe(const Mesh& mesh, const Eigen::Vector2d& p) {
  PointProbe probe;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    double xi, eta;
    if (!locate_in(mesh, mesh.elements[e], p, xi, eta)) continue;
    probe.elements.push_back(e);
    probe.operators.push_back(strain_operator(shape(mesh, mesh.elements[e], std::clamp(xi, -1.0, 1.0),
                                                    std::clamp(eta, -1.0, 1.0))));
  }
  require(!probe.elements.empty(), ErrorKind::MeshError, "probe point lies outside the mesh");
  return probe;
}

DisplacementProbe displacement_probe(const Mesh& mesh, const Eigen::Vector2d& p) {
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    double xi, eta;
    if (!locate_in(mesh, mesh.elements[e], p, xi, eta)) continue;
    return {e, shape(mesh, mesh.elements[e], std::clamp(xi, -1.0, 1.0), std::clamp(eta, -1.0, 1.0)).n};
  }
  fail(ErrorKind::MeshError, "gage point lies outside the mesh");
}

double angle_of(const Eigen::Vector2d& p) { return std::atan2(p.y(), p.x()); }

double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }

// Nodal forces of a uniform normal pressure on the rim between polar angles
// pi/2 -+ alpha, scaled so that the vertical resultant is -1 N.
Eigen::VectorXd unit_strip_load(const Mesh& mesh, double alpha) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * mesh.nodes.size()));
  const auto& rim = mesh.boundary;
  for (std::size_t k = 0; k < rim.size(); ++k) {
    const int ia = rim[k];
    const int ib = rim[(k + 1) % rim.size()];
    const Eigen::Vector2d pa = mesh.nodes[static_cast<std::size_t>(ia)];
    const Eigen::Vector2d pb = mesh.nodes[static_cast<std::size_t>(ib)];
    const double da = wrap_pi(angle_of(pa) - kPi / 2);
    const double db = wrap_pi(angle_of(pb) - kPi / 2);
    if (std::abs(da) > kPi / 2 || std::abs(db) > kPi / 2 || db <= da) continue;
    const double lo = std::max(da, -alpha);
    const double hi = std::min(db, alpha);
    if (hi <= lo) continue;
    const Eigen::Vector2d chord = pb - pa;
    auto parameter = [&](double delta) {
      const Eigen::Vector2d d(std::cos(kPi / 2 + delta), std::sin(kPi / 2 + delta));
      const double num = d.x() * pa.y() - d.y() * pa.x();
      const double den = d.x() * chord.y() - d.y() * chord.x();
      return std::clamp(-num / den, 0.0, 1.0);
    };
    const double t0 = parameter(lo);
    const double t1 = parameter(hi);
    const double length = chord.norm();
    const Eigen::Vector2d normal(chord.y() / length, -chord.x() / length);  // outward for a CCW rim
    const double wa = (t1 - t0) - 0.5 * (t1 * t1 - t0 * t0);
    const double wb = 0.5 * (t1 * t1 - t0 * t0);
    const Eigen::Vector2d traction = -normal * length * mesh.thickness;
    f.segment<2>(2 * ia) += wa * traction;
    f.segment<2>(2 * ib) += wb * traction;
  }
  double vertical = 0.0;
  for (Eigen::Index i = 1; i < f.size(); i += 2) vertical += f[i];
  require(vertical < 0.0, ErrorKind::MeshError, "loading strip does not intersect the mesh rim");
  return f / -vertical;
}

std::vector<int> bottom_support(const Mesh& mesh, double alpha) {
  std::vector<std::pair<double, int>> by_distance;
  for (int id : mesh.boundary) {
    const double d = std::abs(wrap_pi(angle_of(mesh.nodes[static_cast<std::size_t>(id)]) + kPi / 2));
    by_distance.emplace_back(d, id);
  }
  std::sort(by_distance.begin(), by_distance.end());
  std::vector<int> fixed;
  for (std::size_t i = 0; i < by_distance.size(); ++i) {
    if (by_distance[i].first <= alpha + 1e-9 || i < 3) fixed.push_back(by_distance[i].second);
  }
  std::sort(fixed.begin(), fixed.end());
  return fixed;
}

struct Reduced {
  double amplitude = 0.0;
  double phase = 0.0;  // phasor angle
};

Reduced reduce(const std::vector<double>& time, const std::vector<double>& values, double frequency, int cycles,
               signal::Unit unit) {
  const signal::TimeSeries series(time, values, unit);
  const auto fit = signal::fit_sinusoid(signal::last_n_cycles(series, frequency, cycles), frequency);
  return {fit.amplitude, signal::wrap_two_pi(-fit.phase)};
}

// e11 amplitude of the single cycle ending `cycles_before_end` periods before the last sample.
double cycle_amplitude(const std::vector<double>& time, const std::vector<double>& values, double frequency,
                       int cycles_before_end) {
  const double end = time.back() - cycles_before_end / frequency;
  const double start = end - 1.0 / frequency;
  std::vector<double> t, v;
  const double eps = 1e-9 / frequency;
  for (std::size_t i = 0; i < time.size(); ++i) {
    if (time[i] >= start - eps && time[i] <= end + eps) {
      t.push_back(time[i]);
      v.push_back(values[i]);
    }
  }
  return signal::fit_sinusoid(signal::TimeSeries(t, v, signal::Unit::Strain), frequency).amplitude;
}

}  // namespace

HarmonicFEResult simulate_harmonic(const Mesh& mesh, const ViscoelasticMaterial& material, double strip_half_angle,
                                   double gage_length, double frequency, double temperature, double load_amplitude_kn,
                                   const SolverSettings& settings) {
  material.validate();
  require(!mesh.elements.empty(), ErrorKind::MeshError, "mesh has no elements");
  require(frequency > 0.0 && std::isfinite(frequency), ErrorKind::InvalidArgument, "frequency must be positive");
  require(load_amplitude_kn > 0.0 && std::isfinite(load_amplitude_kn), ErrorKind::InvalidArgument,
          "load amplitude must be positive");
  require(strip_half_angle > 0.0 && strip_half_angle < kPi / 4, ErrorKind::InvalidArgument,
          "strip half-angle must lie in (0, pi/4)");
  require(gage_length > 0.0 && gage_length < mesh.diameter, ErrorKind::InvalidArgument,
          "gage length must lie inside the disk");
  require(settings.steps_per_cycle >= 40, ErrorKind::InvalidArgument, "at least 40 steps per cycle are required");
  require(settings.n_cycles >= 8, ErrorKind::InvalidArgument, "at least 8 cycles are required");
  require(settings.reduction_cycles >= 1 && settings.reduction_cycles < settings.n_cycles, ErrorKind::InvalidArgument,
          "reduction cycles must be fewer than the simulated cycles");
  require(min_jacobian(mesh) > 0.0, ErrorKind::MeshError, "mesh has an inverted element");

  const double log_shift = material.log_shift(temperature);
  const double dt = 1.0 / (frequency * settings.steps_per_cycle);
  const double dxi = dt / std::pow(10.0, log_shift);

  // Gauss points followed by one probe point at the centre.
  const double gp = 1.0 / std::sqrt(3.0);
  const std::size_t n_elem = mesh.elements.size();
  const std::size_t n_gauss = 4 * n_elem;
  std::vector<BMatrix> b_ops(n_gauss);
  std::vector<double> weights(n_gauss);
  for (std::size_t e = 0; e < n_elem; ++e) {
    int q = 0;
    for (double eta : {-gp, gp})
      for (double xi : {-gp, gp}) {
        const auto s = shape(mesh, mesh.elements[e], xi, eta);
        b_ops[4 * e + q] = strain_operator(s);
        weights[4 * e + q] = s.det * mesh.thickness;
        ++q;
      }
  }
  const PointProbe centre = strain_probe(mesh, {0.0, 0.0});
  const double l = 0.5 * gage_length;
  const DisplacementProbe right = displacement_probe(mesh, {l, 0.0});
  const DisplacementProbe left = displacement_probe(mesh, {-l, 0.0});
  const DisplacementProbe top = displacement_probe(mesh, {0.0, l});
  const DisplacementProbe bottom = displacement_probe(mesh, {0.0, -l});
  const std::size_t n_points = n_gauss + 1;

  detail::Constitutive law(material, n_points, dxi);
  const Eigen::Matrix3d& d = law.tangent();

  // Stiffness.
  const Eigen::Index n_dof = static_cast<Eigen::Index>(2 * mesh.nodes.size());
  auto dof = [&](std::size_t e, int k) { return 2 * mesh.elements[e][static_cast<std::size_t>(k / 2)] + k % 2; };
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(64 * n_elem);
  for (std::size_t e = 0; e < n_elem; ++e) {
    Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
    for (int q = 0; q < 4; ++q) {
      const Eigen::Map<const Eigen::Matrix<double, 3, 8, Eigen::RowMajor>> b(b_ops[4 * e + q].data());
      ke.noalias() += b.transpose() * d * b * weights[4 * e + q];
    }
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) triplets.emplace_back(dof(e, i), dof(e, j), ke(i, j));
  }
  Eigen::SparseMatrix<double> k_full(n_dof, n_dof);
  k_full.setFromTriplets(triplets.begin(), triplets.end());

  const std::vector<int> fixed_nodes = bottom_support(mesh, strip_half_angle);
  std::vector<Eigen::Index> free_index(static_cast<std::size_t>(n_dof), 0);
  std::vector<bool> is_fixed(static_cast<std::size_t>(n_dof), false);
  for (int node : fixed_nodes) {
    is_fixed[static_cast<std::size_t>(2 * node)] = true;
    is_fixed[static_cast<std::size_t>(2 * node + 1)] = true;
  }
  Eigen::Index n_free = 0;
  for (Eigen::Index i = 0; i < n_dof; ++i) free_index[static_cast<std::size_t>(i)] = is_fixed[static_cast<std::size_t>(i)] ? -1 : n_free++;
  std::vector<Eigen::Triplet<double>> free_triplets;
  free_triplets.reserve(triplets.size());
  for (int c = 0; c < k_full.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(k_full, c); it; ++it) {
      const auto r = free_index[static_cast<std::size_t>(it.row())];
      const auto cc = free_index[static_cast<std::size_t>(it.col())];
      if (r >= 0 && cc >= 0) free_triplets.emplace_back(r, cc, it.value());
    }
  Eigen::SparseMatrix<double> k_free(n_free, n_free);
  k_free.setFromTriplets(free_triplets.begin(), free_triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(k_free);
  if (solver.info() != Eigen::Success) fail(ErrorKind::SolverDivergence, "stiffness factorization failed");

  const Eigen::VectorXd unit_load = unit_strip_load(mesh, strip_half_angle);
  const double p0 = load_amplitude_kn * 1e3;  // N

  const int total_steps = settings.steps_per_cycle * settings.n_cycles;
  ProbeHistory hist;
  for (auto* v : {&hist.time, &hist.load, &hist.s11, &hist.s22, &hist.e11, &hist.e22, &hist.u1, &hist.u2}) {
    v->reserve(static_cast<std::size_t>(total_steps + 1));
    v->push_back(0.0);
  }

  std::vector<double> sigma_h, strain(3 * n_points, 0.0);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_dof), f_hist(n_dof), rhs(n_free);
  double max_reaction = 0.0;
  const double omega = 2.0 * kPi * frequency;

  for (int step = 1; step <= total_steps; ++step) {
    const double t = step * dt;
    const double load = p0 * std::sin(omega * t);
    law.history_stress(sigma_h);

    f_hist.setZero();
    for (std::size_t g = 0; g < n_gauss; ++g) {
      const double s0 = sigma_h[g], s1 = sigma_h[n_points + g], s2 = sigma_h[2 * n_points + g];
      const double w = weights[g];
      const auto& b = b_ops[g];
      const std::size_t e = g / 4;
      for (int k = 0; k < 8; ++k) f_hist[dof(e, k)] += w * (b[k] * s0 + b[8 + k] * s1 + b[16 + k] * s2);
    }

    for (Eigen::Index i = 0; i < n_dof; ++i) {
      const auto r = free_index[static_cast<std::size_t>(i)];
      if (r >= 0) rhs[r] = load * unit_load[i] - f_hist[i];
    }
    const Eigen::VectorXd u_free = solver.solve(rhs);
    for (Eigen::Index i = 0; i < n_dof; ++i) {
      const auto r = free_index[static_cast<std::size_t>(i)];
      u[i] = r >= 0 ? u_free[r] : 0.0;
    }

    // Reactions: internal force at the supports must balance the applied load.
    const Eigen::VectorXd f_int = k_full * u + f_hist;
    double rx = 0.0, ry = 0.0;
    for (int node : fixed_nodes) {
      rx += f_int[2 * node];
      ry += f_int[2 * node + 1];
    }
    const double reaction_error = std::hypot(rx, ry - load) / p0;
    max_reaction = std::max(max_reaction, reaction_error);
    if (reaction_error > settings.reaction_tolerance) {
      fail(ErrorKind::SolverDivergence, "support reactions out of balance by " + std::to_string(reaction_error) +
                                            " of the load amplitude at step " + std::to_string(step));
    }

    for (std::size_t g = 0; g < n_gauss; ++g) {
      const auto& b = b_ops[g];
      const std::size_t e = g / 4;
      double e0 = 0, e1 = 0, e2 = 0;
      for (int k = 0; k < 8; ++k) {
        const double uk = u[dof(e, k)];
        e0 += b[k] * uk;
        e1 += b[8 + k] * uk;
        e2 += b[16 + k] * uk;
      }
      strain[g] = e0;
      strain[n_points + g] = e1;
      strain[2 * n_points + g] = e2;
    }
    Eigen::Vector3d ec = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < centre.elements.size(); ++i) {
      const Eigen::Map<const Eigen::Matrix<double, 3, 8, Eigen::RowMajor>> b(centre.operators[i].data());
      Eigen::Matrix<double, 8, 1> ue;
      for (int k = 0; k < 8; ++k) ue[k] = u[dof(centre.elements[i], k)];
      ec += b * ue;
    }
    ec /= static_cast<double>(centre.elements.size());
    const std::size_t c = n_gauss;
    strain[c] = ec[0];
    strain[n_points + c] = ec[1];
    strain[2 * n_points + c] = ec[2];
    const Eigen::Vector3d sc = d * ec + Eigen::Vector3d(sigma_h[c], sigma_h[n_points + c], sigma_h[2 * n_points + c]);
    law.advance(strain);

    auto displacement = [&](const DisplacementProbe& p, int comp) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += p.n[a] * u[2 * mesh.elements[p.element][static_cast<std::size_t>(a)] + comp];
      return v;
    };
    const double u1 = displacement(right, 0) - displacement(left, 0);
    const double u2 = displacement(top, 1) - displacement(bottom, 1);
    if (!std::isfinite(u1) || !std::isfinite(u2) || !sc.allFinite() || !ec.allFinite()) {
      fail(ErrorKind::SolverDivergence, "non-finite response at step " + std::to_string(step));
    }
    hist.time.push_back(t);
    hist.load.push_back(load * 1e-3);
    hist.s11.push_back(sc[0] * 1e3);
    hist.s22.push_back(sc[1] * 1e3);
    hist.e11.push_back(ec[0]);
    hist.e22.push_back(ec[1]);
    hist.u1.push_back(u1);
    hist.u2.push_back(u2);
  }

  HarmonicFEResult result;
  result.frequency = frequency;
  result.temperature = temperature;
  result.applied_load_amplitude = load_amplitude_kn;
  result.element_count = n_elem;
  result.max_reaction_error = max_reaction;
  const int nc = settings.reduction_cycles;
  auto assign = [&](const std::vector<double>& v, signal::Unit unit, double& amp, double& phase) {
    const auto r = reduce(hist.time, v, frequency, nc, unit);
    amp = r.amplitude;
    phase = r.phase;
  };
  assign(hist.s11, signal::Unit::StressKPa, result.s11_amplitude, result.s11_phase);
  assign(hist.s22, signal::Unit::StressKPa, result.s22_amplitude, result.s22_phase);
  assign(hist.e11, signal::Unit::Strain, result.e11_amplitude, result.e11_phase);
  assign(hist.e22, signal::Unit::Strain, result.e22_amplitude, result.e22_phase);
  assign(hist.u1, signal::Unit::DisplacementMM, result.u1_amplitude, result.u1_phase);
  assign(hist.u2, signal::Unit::DisplacementMM, result.u2_amplitude, result.u2_phase);

  const double last = cycle_amplitude(hist.time, hist.e11, frequency, 0);
  const double previous = cycle_amplitude(hist.time, hist.e11, frequency, 1);
  result.drift = last > 0.0 ? std::abs(last - previous) / last : 0.0;
  result.steady = result.drift <= settings.drift_tolerance;
  if (settings.keep_histories) result.history = std::move(hist);
  return result;
}

HarmonicFEResult HarmonicFEResult::scaled(double factor) const {
  require(factor > 0.0 && std::isfinite(factor), ErrorKind::InvalidArgument, "scale factor must be positive");
  HarmonicFEResult r = *this;
  r.applied_load_amplitude *= factor;
  for (double* a : {&r.s11_amplitude, &r.s22_amplitude, &r.e11_amplitude, &r.e22_amplitude, &r.u1_amplitude,
                    &r.u2_amplitude})
    *a *= factor;
  if (r.history) {
    for (auto* v : {&r.history->load, &r.history->s11, &r.history->s22, &r.history->e11, &r.history->e22,
                    &r.history->u1, &r.history->u2})
      for (double& x : *v) x *= factor;
  }
  return r;
}

}  // namespace idt::fe
