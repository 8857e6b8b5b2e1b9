#include "bqcf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bqcf {

ElementGeometry element_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  const Vec2 e1 = p1 - p0;
  const Vec2 e2 = p2 - p0;
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  if (!(det > 0.0)) throw std::domain_error("degenerate or negatively oriented triangle");
  ElementGeometry g;
  g.area = 0.5 * det;
  // grad of barycentric coordinates: rows of inverse of [e1 e2]
  const Vec2 g1(e2.y() / det, -e2.x() / det);
  const Vec2 g2(-e1.y() / det, e1.x() / det);
  g.grad = {-(g1 + g2), g1, g2};
  return g;
}

void FEMesh::rebuild_geometry() {
  geometry.clear();
  geometry.reserve(triangles.size());
  for (const auto& t : triangles) {
    geometry.push_back(element_geometry(nodes[static_cast<std::size_t>(t[0])], nodes[static_cast<std::size_t>(t[1])],
                                        nodes[static_cast<std::size_t>(t[2])]));
  }
}

double FEMesh::element_size(int t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  double h = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
    const Vec2& b = nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])];
    h = std::max(h, (a - b).norm());
  }
  return h;
}

double FEMesh::min_angle_degrees() const {
  double best = 180.0;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      const Vec2& p = nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
      const Vec2& a = nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])];
      const Vec2& b = nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 2) % 3)])];
      const Vec2 u = a - p;
      const Vec2 v = b - p;
      const double c = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
      best = std::min(best, std::acos(c) * 180.0 / std::numbers::pi);
    }
  }
  return best;
}

FEMesh canonical_triangulation(const TriangularLattice& lattice) {
  FEMesh mesh;
  const int n = lattice.num_sites();
  mesh.nodes.reserve(static_cast<std::size_t>(n));
  for (int id = 0; id < n; ++id) {
    mesh.nodes.push_back(lattice.position(id));
    mesh.site.push_back(lattice.coord(id));
    mesh.fine.push_back(1);
    mesh.pinned.push_back(lattice.is_pinned(id) ? 1 : 0);
  }
  for (int id = 0; id < n; ++id) {
    const auto c = lattice.coord(id);
    const auto right = lattice.find(c.i + 1, c.j);
    const auto up = lattice.find(c.i, c.j + 1);
    const auto left_up = lattice.find(c.i - 1, c.j + 1);
    if (right && up) {
      mesh.triangles.push_back({id, *right, *up});
      mesh.geometry.push_back(element_geometry(lattice_position(c.i, c.j), lattice_position(c.i + 1, c.j),
                                               lattice_position(c.i, c.j + 1)));
    }
    if (up && left_up) {
      mesh.triangles.push_back({id, *up, *left_up});
      mesh.geometry.push_back(element_geometry(lattice_position(c.i, c.j), lattice_position(c.i, c.j + 1),
                                               lattice_position(c.i - 1, c.j + 1)));
    }
  }
  return mesh;
}

void write_mesh(std::ostream& os, const FEMesh& mesh) {
  os << "nodes " << mesh.num_nodes() << " triangles " << mesh.num_triangles() << '\n';
  os << std::setprecision(17);
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const Vec2& x = mesh.nodes[static_cast<std::size_t>(k)];
    os << k << ' ' << x.x() << ' ' << x.y() << ' ' << (mesh.fine[static_cast<std::size_t>(k)] ? "fine" : "coarse")
       << '\n';
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    os << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
}

FEMesh read_mesh(std::istream& is) {
  std::string w1, w2;
  long n = -1, m = -1;
  if (!(is >> w1 >> n >> w2 >> m) || w1 != "nodes" || w2 != "triangles" || n < 0 || m < 0) {
    throw std::runtime_error("mesh snapshot: malformed header");
  }
  FEMesh mesh;
  for (long k = 0; k < n; ++k) {
    long id;
    double x, y;
    std::string kind;
    if (!(is >> id >> x >> y >> kind) || id != k || (kind != "fine" && kind != "coarse")) {
      throw std::runtime_error("mesh snapshot: malformed node line " + std::to_string(k));
    }
    mesh.nodes.emplace_back(x, y);
    const bool fine = kind == "fine";
    mesh.fine.push_back(fine ? 1 : 0);
    LatticeCoord c{};
    if (fine) {
      const double j = 2.0 * y / std::sqrt(3.0);
      c = {static_cast<int>(std::lround(x - 0.5 * j)), static_cast<int>(std::lround(j))};
    }
    mesh.site.push_back(c);
    mesh.pinned.push_back(0);
  }
  for (long t = 0; t < m; ++t) {
    long id;
    std::array<int, 3> tri{};
    if (!(is >> id >> tri[0] >> tri[1] >> tri[2]) || id != t) {
      throw std::runtime_error("mesh snapshot: malformed triangle line " + std::to_string(t));
    }
    for (int v : tri) {
      if (v < 0 || v >= n) throw std::runtime_error("mesh snapshot: triangle references missing node");
    }
    mesh.triangles.push_back(tri);
  }
  mesh.rebuild_geometry();
  return mesh;
}

}  // namespace bqcf
