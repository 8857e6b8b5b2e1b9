#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include <gtest/gtest.h>

#include "bqcf/lattice2d.hpp"

using namespace bqcf;

namespace {

int hex_count(int R) { return 3 * R * (R + 1) + 1; }

}  // namespace

TEST(Lattice2D, DirectionsAreUnitAndSqrt3Bonds) {
  for (int d = 0; d < kNumDirections; ++d) {
    const double len = direction_vector(d).norm();
    EXPECT_NEAR(len, is_nearest_direction(d) ? 1.0 : std::sqrt(3.0), 1e-14) << d;
    EXPECT_LT((direction_vector(d) + direction_vector(opposite_direction(d))).norm(), 1e-14);
  }
}

TEST(Lattice2D, HexNormIsInvariantUnderRotation) {
  for (int i = -5; i <= 5; ++i) {
    for (int j = -5; j <= 5; ++j) {
      // rotation by 60 degrees: (i, j) -> (-j, i + j)
      EXPECT_EQ(hex_norm(i, j), hex_norm(-j, i + j));
      EXPECT_EQ(hex_norm(i, j), hex_norm(-i, -j));
    }
  }
}

TEST(Lattice2D, DirichletHexagonCounts) {
  for (int N : {8, 12, 32}) {
    const auto lat = TriangularLattice::dirichlet_hexagon(N);
    const int R = N / 2;
    EXPECT_EQ(lat.num_sites(), hex_count(R + 2));
    int free = 0;
    for (int id = 0; id < lat.num_sites(); ++id) {
      if (!lat.is_pinned(id)) {
        ++free;
        EXPECT_LT(hex_norm(lat.coord(id).i, lat.coord(id).j), R);
      }
    }
    EXPECT_EQ(free, hex_count(R - 1));
    EXPECT_EQ(lat.domain_radius(), R);
    EXPECT_EQ(lat.boundary(), Boundary::dirichlet);
  }
  EXPECT_THROW(TriangularLattice::dirichlet_hexagon(7), std::invalid_argument);
  EXPECT_EQ(TriangularLattice::dirichlet_hexagon(8, 0).num_sites(), hex_count(4));
}

TEST(Lattice2D, PeriodicCellWrapsNeighbours) {
  const int N = 6;
  const auto lat = TriangularLattice::periodic(N);
  EXPECT_EQ(lat.num_sites(), N * N);
  std::set<std::pair<int, int>> seen;
  for (int id = 0; id < lat.num_sites(); ++id) {
    seen.insert({lat.coord(id).i, lat.coord(id).j});
    for (int d = 0; d < kNumDirections; ++d) {
      const int nb = lat.neighbor(id, d);
      ASSERT_GE(nb, 0);
      EXPECT_EQ(lat.neighbor(nb, opposite_direction(d)), id);
    }
  }
  EXPECT_EQ(static_cast<int>(seen.size()), N * N);
}

TEST(Lattice2D, DirichletNeighboursAreSymmetric) {
  const auto lat = TriangularLattice::dirichlet_hexagon(10);
  for (int id = 0; id < lat.num_sites(); ++id) {
    for (int d = 0; d < kNumDirections; ++d) {
      const int nb = lat.neighbor(id, d);
      if (nb < 0) {
        // only the outermost ghost layers lack neighbours
        EXPECT_GE(hex_norm(lat.coord(id).i, lat.coord(id).j), 6);
        continue;
      }
      EXPECT_EQ(lat.neighbor(nb, opposite_direction(d)), id);
    }
    if (!lat.is_pinned(id)) {
      for (int d = 0; d < kNumDirections; ++d) EXPECT_GE(lat.neighbor(id, d), 0);
    }
  }
}

TEST(Lattice2D, RegionClassification) {
  const auto lat = TriangularLattice::dirichlet_hexagon(20);
  const auto reg = classify_sites(lat, 3, 6);
  EXPECT_EQ(reg.K(), 3);
  EXPECT_EQ(reg.count_atomistic + reg.count_blend + reg.count_continuum, lat.num_sites());
  EXPECT_EQ(reg.count_atomistic, hex_count(3));
}

TEST(Lattice2D, Defects) {
  const auto crack = microcrack_sites(2);
  ASSERT_EQ(crack.size(), 5u);
  EXPECT_EQ(crack.front(), (LatticeCoord{-2, 0}));
  EXPECT_EQ(divacancy_sites().size(), 2u);
  const auto lat = TriangularLattice::dirichlet_hexagon(12);
  const VacancySet vac(lat, crack);
  EXPECT_EQ(vac.ids().size(), 5u);
  const int origin = *lat.find(0, 0);
  EXPECT_TRUE(vac.contains(origin));
  EXPECT_THROW(neighbors(lat, vac, origin), std::invalid_argument);
  const int above = *lat.find(0, 1);
  const auto nb = neighbors(lat, vac, above);
  int missing = 0;
  for (const auto& b : nb) missing += b.id < 0 ? 1 : 0;
  // (0,1) loses (0,0), (1,0) below it and the second neighbours (1,-1)+... on the crack row
  EXPECT_GE(missing, 2);
  EXPECT_THROW(VacancySet(lat, {{40, 0}}), std::invalid_argument);
}

TEST(Lattice2D, DifferenceOperatorOnLinearField) {
  const auto lat = TriangularLattice::periodic(8);
  Field2D u = Field2D::Zero(2 * lat.num_sites());
  for (int id = 0; id < lat.num_sites(); ++id) u[2 * id] = 3.0;
  const Field2D d = diff2d(lat, u, 0);
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(diff2d(lat, Field2D::Zero(3), 0), std::invalid_argument);
}
