#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bqcf/operator.hpp"
#include "bqcf/potential.hpp"

namespace bqcf {

/// Integer lattice coordinates: x = i a1 + j a2 with a1 = (1, 0), a2 = (1/2, sqrt(3)/2)
/// in unscaled units (nearest-neighbour spacing 1).
struct LatticeCoord {
  int i = 0;
  int j = 0;
  friend bool operator==(const LatticeCoord&, const LatticeCoord&) = default;
};

/// Number of hexagonal rings between the origin and (i, j); Hex(R) is {hex_norm <= R}.
inline int hex_norm(int i, int j) {
  const int a = i < 0 ? -i : i;
  const int b = j < 0 ? -j : j;
  const int c = (i + j) < 0 ? -(i + j) : (i + j);
  return a > b ? (a > c ? a : c) : (b > c ? b : c);
}

/// Closed hexagon Hex(R) with vertices R a1, R a2, R a3, ... (Cartesian, unscaled).
bool hex_contains(double R, const Vec2& x);

Vec2 lattice_position(int i, int j);

/// The 12 bond directions: a1, a2, a3, b1, b2, b3 followed by their negatives
/// (direction d + 6 is the opposite of d). b1 = a1 + a2, b2 = a2 + a3, b3 = a3 - a1.
inline constexpr int kNumDirections = 12;
inline constexpr std::array<LatticeCoord, kNumDirections> kDirections = {{
    {1, 0}, {0, 1}, {-1, 1}, {1, 1}, {-1, 2}, {-2, 1},
    {-1, 0}, {0, -1}, {1, -1}, {-1, -1}, {1, -2}, {2, -1},
}};
inline constexpr bool is_nearest_direction(int d) { return d % 6 < 3; }
inline constexpr int opposite_direction(int d) { return (d + 6) % kNumDirections; }
Vec2 direction_vector(int d);

/// Lattice sites of a computational cell.
///
/// periodic(N): the parallelogram (-N/2, N/2]^2 in lattice coordinates with wrap,
/// N^2 sites, all free (mean-zero displacements).
/// dirichlet_hexagon(N): all sites of Hex(N/2 + ghost); sites with hex_norm < N/2
/// are free, the closed boundary ring and the ghost layers are pinned to y = Bx.
class TriangularLattice {
 public:
  static TriangularLattice periodic(int N);
  static TriangularLattice dirichlet_hexagon(int N, int ghost_layers = 2);

  int N() const noexcept { return n_; }
  double epsilon() const noexcept { return 1.0 / n_; }
  Boundary boundary() const noexcept { return boundary_; }
  /// Hexagon radius of the Dirichlet domain (N/2); 0 for periodic cells.
  int domain_radius() const noexcept { return radius_; }

  int num_sites() const noexcept { return static_cast<int>(coords_.size()); }
  const LatticeCoord& coord(int id) const { return coords_[static_cast<std::size_t>(id)]; }
  Vec2 position(int id) const { return lattice_position(coord(id).i, coord(id).j); }
  bool is_pinned(int id) const { return pinned_[static_cast<std::size_t>(id)] != 0; }

  /// Site at (i, j), wrapped for periodic cells; nullopt outside the stored set.
  std::optional<int> find(int i, int j) const;
  /// Neighbour of id along direction d, or -1 when it is not stored.
  int neighbor(int id, int d) const;

 private:
  TriangularLattice() = default;
  void build_index();

  int n_ = 0;
  int radius_ = 0;
  Boundary boundary_ = Boundary::periodic;
  std::vector<LatticeCoord> coords_;
  std::vector<char> pinned_;
  int imin_ = 0, jmin_ = 0, width_ = 0, height_ = 0;
  std::vector<int> grid_;
  std::vector<int> neighbors_;  // num_sites * 12
};

enum class Region { atomistic, blend, continuum };

/// Hexagonal partition into L^a = Hex(R_a), L^b = Hex(R_b) \ Hex(R_a), L^c the rest.
struct RegionDecomposition {
  int R_a = 0;
  int R_b = 0;
  std::vector<Region> region;
  int count_atomistic = 0;
  int count_blend = 0;
  int count_continuum = 0;

  int K() const noexcept { return R_b - R_a; }
};

/// Throws std::invalid_argument unless 0 <= R_a < R_b < N/2.
RegionDecomposition classify_sites(const TriangularLattice& lattice, int R_a, int R_b);

/// Removed sites. Bonds into vacancies are dropped from every pair sum.
class VacancySet {
 public:
  VacancySet() = default;
  VacancySet(const TriangularLattice& lattice, const std::vector<LatticeCoord>& sites);

  bool contains(int id) const {
    return id >= 0 && static_cast<std::size_t>(id) < mask_.size() && mask_[static_cast<std::size_t>(id)] != 0;
  }
  const std::vector<int>& ids() const noexcept { return ids_; }
  const std::vector<LatticeCoord>& coords() const noexcept { return coords_; }
  bool empty() const noexcept { return ids_.empty(); }

 private:
  std::vector<int> ids_;
  std::vector<LatticeCoord> coords_;
  std::vector<char> mask_;
};

/// {-h e1, ..., h e1}: a straight crack of 2h + 1 removed atoms.
std::vector<LatticeCoord> microcrack_sites(int half_length);
/// {0, e1}
std::vector<LatticeCoord> divacancy_sites();

struct NeighborBond {
  int direction = 0;
  int id = -1;  ///< -1 when the bond is absent (vacancy or outside the cell)
};

/// Throws std::invalid_argument when site itself is a vacancy.
std::array<NeighborBond, kNumDirections> neighbors(const TriangularLattice& lattice, const VacancySet& vacancies,
                                                   int site);

/// Displacement fields store two components per site, interleaved.
using Field2D = Eigen::VectorXd;

/// D_r u(x) = (u(x + r) - u(x)) / eps; unstored neighbours carry zero displacement.
Field2D diff2d(const TriangularLattice& lattice, const Field2D& u, int direction);
/// D_r D_s u(x) = (D_s u(x + r) - D_s u(x)) / eps.
Field2D diff2d2(const TriangularLattice& lattice, const Field2D& u, int r, int s);

}  // namespace bqcf
