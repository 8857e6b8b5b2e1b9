#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "bqcf/lattice2d.hpp"
#include "bqcf/potential.hpp"

namespace bqcf {

/// Area and barycentric-basis gradients of one P1 triangle.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad;
};

/// Throws std::domain_error for degenerate or negatively oriented triangles.
ElementGeometry element_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2);

/// P1 triangulation in unscaled reference coordinates.
///
/// `fine` nodes coincide with lattice sites (their integer coordinates are kept
/// in `site`); `pinned` nodes carry the boundary condition y = Bx. Geometry is
/// stored per triangle so that periodic meshes may reference wrapped node ids.
struct FEMesh {
  std::vector<Vec2> nodes;
  std::vector<char> fine;
  std::vector<LatticeCoord> site;
  std::vector<char> pinned;
  std::vector<std::array<int, 3>> triangles;
  std::vector<ElementGeometry> geometry;

  int num_nodes() const noexcept { return static_cast<int>(nodes.size()); }
  int num_triangles() const noexcept { return static_cast<int>(triangles.size()); }

  /// Recompute per-triangle geometry from node positions (non-periodic meshes).
  void rebuild_geometry();
  /// Longest edge of triangle t.
  double element_size(int t) const;
  /// Smallest interior angle over the mesh, in degrees.
  double min_angle_degrees() const;
};

/// Canonical triangulation of a lattice cell: every site (i, j) spawns the
/// triangles {(i,j), (i+1,j), (i,j+1)} and {(i,j), (i,j+1), (i-1,j+1)} when
/// all three vertices are stored. Node ids equal lattice site ids.
FEMesh canonical_triangulation(const TriangularLattice& lattice);

/// Plain-text snapshot: `nodes <n> triangles <m>`, then n lines
/// `id x y fine|coarse`, then m lines `id n1 n2 n3`.
void write_mesh(std::ostream& os, const FEMesh& mesh);
/// Inverse of write_mesh. Pinned flags are not part of the format and come back
/// cleared; lattice coordinates of fine nodes are recovered from positions.
FEMesh read_mesh(std::istream& is);

}  // namespace bqcf
