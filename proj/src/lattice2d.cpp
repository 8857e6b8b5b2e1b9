#include "bqcf/lattice2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bqcf {

namespace {

const double kSqrt3 = std::sqrt(3.0);

int wrap_periodic(int k, int N) {
  // representative in (-N/2, N/2]
  const int half = N / 2;
  int r = (k + half - 1) % N;
  if (r < 0) r += N;
  return r - half + 1;
}

}  // namespace

Vec2 lattice_position(int i, int j) { return Vec2(i + 0.5 * j, 0.5 * kSqrt3 * j); }

Vec2 direction_vector(int d) {
  const auto& c = kDirections[static_cast<std::size_t>(d)];
  return lattice_position(c.i, c.j);
}

bool hex_contains(double R, const Vec2& x) {
  const double j = 2.0 * x.y() / kSqrt3;
  const double i = x.x() - 0.5 * j;
  const double tol = 1e-12 * std::max(1.0, R);
  return std::abs(i) <= R + tol && std::abs(j) <= R + tol && std::abs(i + j) <= R + tol;
}

TriangularLattice TriangularLattice::periodic(int N) {
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("periodic lattice needs even N >= 4");
  TriangularLattice lat;
  lat.n_ = N;
  lat.boundary_ = Boundary::periodic;
  const int half = N / 2;
  for (int j = -half + 1; j <= half; ++j) {
    for (int i = -half + 1; i <= half; ++i) lat.coords_.push_back({i, j});
  }
  lat.pinned_.assign(lat.coords_.size(), 0);
  lat.build_index();
  return lat;
}

TriangularLattice TriangularLattice::dirichlet_hexagon(int N, int ghost_layers) {
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("hexagonal domain needs even N >= 4");
  if (ghost_layers < 0) throw std::invalid_argument("ghost layer count must be >= 0");
  TriangularLattice lat;
  lat.n_ = N;
  lat.radius_ = N / 2;
  lat.boundary_ = Boundary::dirichlet;
  const int outer = lat.radius_ + ghost_layers;
  for (int j = -outer; j <= outer; ++j) {
    for (int i = -outer; i <= outer; ++i) {
      const int h = hex_norm(i, j);
      if (h > outer) continue;
      lat.coords_.push_back({i, j});
      lat.pinned_.push_back(h >= lat.radius_ ? 1 : 0);
    }
  }
  lat.build_index();
  return lat;
}

void TriangularLattice::build_index() {
  int imax = coords_.front().i, jmax = coords_.front().j;
  imin_ = imax;
  jmin_ = jmax;
  for (const auto& c : coords_) {
    imin_ = std::min(imin_, c.i);
    jmin_ = std::min(jmin_, c.j);
    imax = std::max(imax, c.i);
    jmax = std::max(jmax, c.j);
  }
  width_ = imax - imin_ + 1;
  height_ = jmax - jmin_ + 1;
  grid_.assign(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), -1);
  for (int id = 0; id < num_sites(); ++id) {
    const auto& c = coords_[static_cast<std::size_t>(id)];
    grid_[static_cast<std::size_t>(c.j - jmin_) * width_ + static_cast<std::size_t>(c.i - imin_)] = id;
  }
  neighbors_.assign(coords_.size() * kNumDirections, -1);
  for (int id = 0; id < num_sites(); ++id) {
    const auto& c = coords_[static_cast<std::size_t>(id)];
    for (int d = 0; d < kNumDirections; ++d) {
      const auto& off = kDirections[static_cast<std::size_t>(d)];
      const auto nb = find(c.i + off.i, c.j + off.j);
      neighbors_[static_cast<std::size_t>(id) * kNumDirections + d] = nb ? *nb : -1;
    }
  }
}

std::optional<int> TriangularLattice::find(int i, int j) const {
  if (boundary_ == Boundary::periodic) {
    i = wrap_periodic(i, n_);
    j = wrap_periodic(j, n_);
  }
  const int a = i - imin_;
  const int b = j - jmin_;
  if (a < 0 || b < 0 || a >= width_ || b >= height_) return std::nullopt;
  const int id = grid_[static_cast<std::size_t>(b) * width_ + static_cast<std::size_t>(a)];
  if (id < 0) return std::nullopt;
  return id;
}

int TriangularLattice::neighbor(int id, int d) const {
  return neighbors_[static_cast<std::size_t>(id) * kNumDirections + static_cast<std::size_t>(d)];
}

RegionDecomposition classify_sites(const TriangularLattice& lattice, int R_a, int R_b) {
  if (R_a < 0 || R_b <= R_a || 2 * R_b >= lattice.N()) {
    throw std::invalid_argument("region radii must satisfy 0 <= R_a < R_b < N/2 (got R_a=" +
                                std::to_string(R_a) + ", R_b=" + std::to_string(R_b) + ")");
  }
  RegionDecomposition dec;
  dec.R_a = R_a;
  dec.R_b = R_b;
  dec.region.resize(static_cast<std::size_t>(lattice.num_sites()));
  for (int id = 0; id < lattice.num_sites(); ++id) {
    const auto& c = lattice.coord(id);
    const int h = hex_norm(c.i, c.j);
    Region r = Region::continuum;
    if (h <= R_a) {
      r = Region::atomistic;
      ++dec.count_atomistic;
    } else if (h <= R_b) {
      r = Region::blend;
      ++dec.count_blend;
    } else {
      ++dec.count_continuum;
    }
    dec.region[static_cast<std::size_t>(id)] = r;
  }
  return dec;
}

VacancySet::VacancySet(const TriangularLattice& lattice, const std::vector<LatticeCoord>& sites)
    : mask_(static_cast<std::size_t>(lattice.num_sites()), 0) {
  for (const auto& c : sites) {
    const auto id = lattice.find(c.i, c.j);
    if (!id) throw std::invalid_argument("vacancy outside the lattice cell");
    if (mask_[static_cast<std::size_t>(*id)]) continue;
    mask_[static_cast<std::size_t>(*id)] = 1;
    ids_.push_back(*id);
    coords_.push_back(c);
  }
}

std::vector<LatticeCoord> microcrack_sites(int half_length) {
  std::vector<LatticeCoord> out;
  for (int i = -half_length; i <= half_length; ++i) out.push_back({i, 0});
  return out;
}

std::vector<LatticeCoord> divacancy_sites() { return {{0, 0}, {1, 0}}; }

std::array<NeighborBond, kNumDirections> neighbors(const TriangularLattice& lattice, const VacancySet& vacancies,
                                                   int site) {
  if (vacancies.contains(site)) throw std::invalid_argument("neighbour query on a vacancy site");
  std::array<NeighborBond, kNumDirections> out{};
  for (int d = 0; d < kNumDirections; ++d) {
    int nb = lattice.neighbor(site, d);
    if (vacancies.contains(nb)) nb = -1;
    out[static_cast<std::size_t>(d)] = {d, nb};
  }
  return out;
}

Field2D diff2d(const TriangularLattice& lattice, const Field2D& u, int direction) {
  if (u.size() != 2 * lattice.num_sites()) throw std::invalid_argument("field size does not match lattice");
  const double inv_eps = lattice.N();
  Field2D out(u.size());
  for (int id = 0; id < lattice.num_sites(); ++id) {
    const int nb = lattice.neighbor(id, direction);
    for (int c = 0; c < 2; ++c) {
      const double next = nb >= 0 ? u[2 * nb + c] : 0.0;
      out[2 * id + c] = (next - u[2 * id + c]) * inv_eps;
    }
  }
  return out;
}

Field2D diff2d2(const TriangularLattice& lattice, const Field2D& u, int r, int s) {
  return diff2d(lattice, diff2d(lattice, u, s), r);
}

}  // namespace bqcf
