#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "idt/error.hpp"
#include "idt/fe.hpp"

namespace idt::fe {
namespace {

class NodeTable {
 public:
  explicit NodeTable(std::vector<Eigen::Vector2d>& nodes, double scale) : nodes_(nodes), scale_(scale) {}

  int add(const Eigen::Vector2d& p) {
    const std::pair<long long, long long> key{std::llround(p.x() * 1e7 / scale_), std::llround(p.y() * 1e7 / scale_)};
    const auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(p);
    index_.emplace(key, id);
    return id;
  }

 private:
  std::vector<Eigen::Vector2d>& nodes_;
  double scale_;
  std::map<std::pair<long long, long long>, int> index_;
};

double element_jacobian(const Mesh& mesh, const std::array<int, 4>& e, double xi, double eta) {
  const double dn_dxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4, -(1 + eta) / 4};
  const double dn_deta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
  double j00 = 0, j01 = 0, j10 = 0, j11 = 0;
  for (int a = 0; a < 4; ++a) {
    const auto& p = mesh.nodes[static_cast<std::size_t>(e[static_cast<std::size_t>(a)])];
    j00 += dn_dxi[a] * p.x();
    j01 += dn_dxi[a] * p.y();
    j10 += dn_deta[a] * p.x();
    j11 += dn_deta[a] * p.y();
  }
  return j00 * j11 - j01 * j10;
}

}  // namespace

double min_jacobian(const Mesh& mesh) {
  const double g = 1.0 / std::sqrt(3.0);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& e : mesh.elements) {
    for (double xi : {-g, g})
      for (double eta : {-g, g}) worst = std::min(worst, element_jacobian(mesh, e, xi, eta));
  }
  return worst;
}

Mesh build_mesh(double diameter, double thickness, double target_size) {
  if (!(diameter > 0.0) || !(thickness > 0.0)) fail(ErrorKind::MeshError, "diameter and thickness must be positive");
  if (!(target_size > 0.0 && target_size < diameter / 4.0)) {
    fail(ErrorKind::MeshError, "target size " + std::to_string(target_size) + " mm must lie in (0, diameter/4)");
  }
  const double r = 0.5 * diameter;
  const double s = 0.5 * r / std::sqrt(2.0);  // half-width of the central square (corners at r/2)
  const double half_pi = 0.5 * std::numbers::pi;
  const int n = std::max(2, static_cast<int>(std::lround((half_pi * r + 2.0 * s) / (2.0 * target_size))));
  const int m = std::max(1, static_cast<int>(std::lround((r - 0.5 * (0.5 * r + s)) / target_size)));

  Mesh mesh;
  mesh.diameter = diameter;
  mesh.thickness = thickness;
  mesh.target_size = target_size;
  NodeTable table(mesh.nodes, r);

  // Central square.
  std::vector<int> grid(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      grid[static_cast<std::size_t>(j * (n + 1) + i)] =
          table.add({-s + 2.0 * s * i / n, -s + 2.0 * s * j / n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      auto id = [&](int a, int b) { return grid[static_cast<std::size_t>(b * (n + 1) + a)]; };
      mesh.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }

  // Four mapped blocks between the square sides and the rim quadrants.
  const Eigen::Vector2d corners[4] = {{s, -s}, {s, s}, {-s, s}, {-s, -s}};
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector2d& start = corners[k];
    const Eigen::Vector2d& end = corners[(k + 1) % 4];
    const double theta0 = -0.25 * std::numbers::pi + k * half_pi;
    std::vector<int> block(static_cast<std::size_t>((n + 1) * (m + 1)));
    for (int a = 0; a <= n; ++a) {
      const double t = static_cast<double>(a) / n;
      const Eigen::Vector2d inner = start + t * (end - start);
      const double theta = theta0 + t * half_pi;
      const Eigen::Vector2d outer(r * std::cos(theta), r * std::sin(theta));
      for (int b = 0; b <= m; ++b) {
        const double w = static_cast<double>(b) / m;
        const Eigen::Vector2d p = b == m ? outer : Eigen::Vector2d(inner + w * (outer - inner));
        block[static_cast<std::size_t>(a * (m + 1) + b)] = table.add(p);
      }
      if (a < n) mesh.boundary.push_back(block[static_cast<std::size_t>(a * (m + 1) + m)]);
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < m; ++b) {
        auto id = [&](int i, int j) { return block[static_cast<std::size_t>(i * (m + 1) + j)]; };
        mesh.elements.push_back({id(a, b), id(a, b + 1), id(a + 1, b + 1), id(a + 1, b)});
      }
  }

  double area = 0.0;
  for (const auto& e : mesh.elements) area += 4.0 * element_jacobian(mesh, e, 0.0, 0.0);
  mesh.characteristic_size = std::sqrt(area / static_cast<double>(mesh.elements.size()));
  if (!(min_jacobian(mesh) > 0.0)) fail(ErrorKind::MeshError, "mesh contains an inverted element");
  return mesh;
}

}  // namespace idt::fe
