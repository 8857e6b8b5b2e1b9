#include "bqcf/coarse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace bqcf {

namespace {

constexpr std::array<LatticeCoord, 6> kCorners = {{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

void add_ccw(FEMesh& mesh, int a, int b, int c) {
  const Vec2& pa = mesh.nodes[static_cast<std::size_t>(a)];
  const double o = cross(mesh.nodes[static_cast<std::size_t>(b)] - pa, mesh.nodes[static_cast<std::size_t>(c)] - pa);
  if (o > 0.0) {
    mesh.triangles.push_back({a, b, c});
  } else {
    mesh.triangles.push_back({a, c, b});
  }
}

int64_t site_key(int i, int j) { return (static_cast<int64_t>(i) << 32) ^ static_cast<uint32_t>(j); }

// Lattice sites of Hex(R) with the canonical triangles inside it.
FEMesh lattice_hexagon(int R, std::unordered_map<int64_t, int>& index) {
  FEMesh mesh;
  for (int j = -R; j <= R; ++j) {
    for (int i = -R; i <= R; ++i) {
      if (hex_norm(i, j) > R) continue;
      index.emplace(site_key(i, j), mesh.num_nodes());
      mesh.nodes.push_back(lattice_position(i, j));
      mesh.fine.push_back(1);
      mesh.site.push_back({i, j});
      mesh.pinned.push_back(0);
    }
  }
  auto find = [&](int i, int j) {
    const auto it = index.find(site_key(i, j));
    return it == index.end() ? -1 : it->second;
  };
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const auto [i, j] = mesh.site[static_cast<std::size_t>(k)];
    const int e = find(i + 1, j);
    const int n = find(i, j + 1);
    const int nw = find(i - 1, j + 1);
    if (e >= 0 && n >= 0) mesh.triangles.push_back({k, e, n});
    if (n >= 0 && nw >= 0) mesh.triangles.push_back({k, n, nw});
  }
  return mesh;
}

}  // namespace

double graded_element_size(double rho, double R_b) { return std::max(1.0, std::pow(rho / R_b, 1.5)); }

FEMesh build_lattice_mesh(int N) {
  if (N < 1) throw std::invalid_argument("lattice mesh needs N >= 1");
  std::unordered_map<int64_t, int> index;
  FEMesh mesh = lattice_hexagon(N, index);
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const auto& s = mesh.site[static_cast<std::size_t>(k)];
    mesh.pinned[static_cast<std::size_t>(k)] = hex_norm(s.i, s.j) == N ? 1 : 0;
  }
  mesh.rebuild_geometry();
  return mesh;
}

FEMesh build_graded_mesh(int R_a, int K, int N) {
  if (R_a < 0 || K < 0 || !(R_a + K + 2 < N)) throw std::invalid_argument("graded mesh needs R_a + K + 2 < N");
  const int R_b = std::max(1, R_a + K);
  const int F = R_a + K + 2;
  std::unordered_map<int64_t, int> index;
  FEMesh mesh = lattice_hexagon(F, index);

  // ring radii equidistributed in s(rho) = integral of 1/h, which is closed-form since h > 1 beyond R_b
  const double c = 2.0 * std::pow(static_cast<double>(R_b), 1.5);
  const double s_total = c * (1.0 / std::sqrt(static_cast<double>(F)) - 1.0 / std::sqrt(static_cast<double>(N)));
  const int rings = std::max(1, static_cast<int>(std::ceil(s_total)));
  const double ds = s_total / rings;
  std::vector<double> rho{static_cast<double>(F)};
  std::vector<int> segs{F};
  for (int m = 1; m <= rings; ++m) {
    const double r = m == rings ? static_cast<double>(N)
                                : std::pow(1.0 / std::sqrt(static_cast<double>(F)) - m * ds / c, -2.0);
    const int target = static_cast<int>(std::lround(r / (graded_element_size(r, R_b) * ds)));
    segs.push_back(std::clamp(target, std::max(1, (3 * segs.back() + 3) / 4), segs.back()));
    rho.push_back(r);
  }

  // ring node ids: ring m, side k, position i in [0, segs[m])
  std::vector<int> base(rho.size(), 0);
  auto ring_node = [&](std::size_t m, int k, int i) {
    const int n = segs[m];
    k = (k + i / n) % 6;
    i %= n;
    if (m == 0) {
      const LatticeCoord a = kCorners[static_cast<std::size_t>(k)];
      const LatticeCoord b = kCorners[static_cast<std::size_t>((k + 1) % 6)];
      return index.at(site_key(F * a.i + i * (b.i - a.i), F * a.j + i * (b.j - a.j)));
    }
    return base[m] + k * n + i;
  };
  for (std::size_t m = 1; m < rho.size(); ++m) {
    base[m] = mesh.num_nodes();
    const int n = segs[m];
    for (int k = 0; k < 6; ++k) {
      const Vec2 a = lattice_position(kCorners[static_cast<std::size_t>(k)].i, kCorners[static_cast<std::size_t>(k)].j);
      const auto& cb = kCorners[static_cast<std::size_t>((k + 1) % 6)];
      const Vec2 b = lattice_position(cb.i, cb.j);
      for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        mesh.nodes.push_back(rho[m] * ((1.0 - t) * a + t * b));
        mesh.fine.push_back(0);
        mesh.site.push_back({0, 0});
        mesh.pinned.push_back(m + 1 == rho.size() ? 1 : 0);
      }
    }
  }

  // zipper triangulation of each side strip
  for (std::size_t m = 0; m + 1 < rho.size(); ++m) {
    const int na = segs[m];
    const int nb = segs[m + 1];
    for (int k = 0; k < 6; ++k) {
      int i = 0;
      int j = 0;
      while (i < na || j < nb) {
        const bool inner = j == nb || (i < na && static_cast<int64_t>(i + 1) * nb <= static_cast<int64_t>(j + 1) * na);
        if (inner) {
          add_ccw(mesh, ring_node(m, k, i), ring_node(m, k, i + 1), ring_node(m + 1, k, j));
          ++i;
        } else {
          add_ccw(mesh, ring_node(m, k, i), ring_node(m + 1, k, j + 1), ring_node(m + 1, k, j));
          ++j;
        }
      }
    }
  }
  mesh.rebuild_geometry();
  return mesh;
}

CoarseMethod parse_coarse_method(std::string_view name) {
  if (name == "atm") return CoarseMethod::atm;
  if (name == "qcf") return CoarseMethod::qcf;
  if (name == "bqcf") return CoarseMethod::bqcf;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

DefectCase parse_defect_case(std::string_view name) {
  if (name == "divacancy") return DefectCase::divacancy;
  if (name == "microcrack") return DefectCase::microcrack;
  throw std::invalid_argument("unknown case '" + std::string(name) + "'");
}

std::string_view to_string(CoarseMethod method) {
  switch (method) {
    case CoarseMethod::atm: return "atm";
    case CoarseMethod::qcf: return "qcf";
    case CoarseMethod::bqcf: return "bqcf";
  }
  return "?";
}

std::string_view to_string(DefectCase defect) {
  return defect == DefectCase::divacancy ? "divacancy" : "microcrack";
}

std::vector<LatticeCoord> defect_sites(DefectCase defect) {
  return defect == DefectCase::divacancy ? divacancy_sites() : microcrack_sites(5);
}

Mat2 defect_strain(DefectCase defect, const PairPotential& phi) {
  Mat2 F;
  if (defect == DefectCase::divacancy) {
    F << 1.03, 0.03, 0.0, 1.03;
  } else {
    F << 1.0, 0.03, 0.0, 1.03;
  }
  return F * ground_state_stretch(phi);
}

ForceModel2D::BondTable mesh_bond_table(const FEMesh& mesh, int N, const std::vector<char>& vacancy) {
  std::unordered_map<int64_t, int> index;
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    if (mesh.fine[static_cast<std::size_t>(k)]) index.emplace(site_key(mesh.site[static_cast<std::size_t>(k)].i, mesh.site[static_cast<std::size_t>(k)].j), k);
  }
  ForceModel2D::BondTable bonds(static_cast<std::size_t>(mesh.num_nodes()));
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    auto& row = bonds[static_cast<std::size_t>(k)];
    row.fill(-1);
    if (!mesh.fine[static_cast<std::size_t>(k)]) continue;
    const auto& s = mesh.site[static_cast<std::size_t>(k)];
    for (int d = 0; d < kNumDirections; ++d) {
      const int i = s.i + kDirections[static_cast<std::size_t>(d)].i;
      const int j = s.j + kDirections[static_cast<std::size_t>(d)].j;
      const auto it = index.find(site_key(i, j));
      if (it != index.end()) {
        if (!vacancy[static_cast<std::size_t>(it->second)]) row[static_cast<std::size_t>(d)] = it->second;
      } else if (hex_norm(i, j) > N) {
        row[static_cast<std::size_t>(d)] = kGhostNeighbor;
      }
    }
  }
  return bonds;
}

CoarseProblem make_coarse_problem(CoarseMethod method, DefectCase defect, int R_a, const PairPotential& phi) {
  switch (method) {
    case CoarseMethod::bqcf: return make_coarse_problem(method, defect, R_a, R_a, R_a * R_a, phi);
    case CoarseMethod::qcf: return make_coarse_problem(method, defect, R_a, R_a, R_a * R_a, phi);
    case CoarseMethod::atm: return make_coarse_problem(method, defect, R_a, 0, R_a, phi);
  }
  throw std::invalid_argument("unknown method");
}

CoarseProblem make_coarse_problem(CoarseMethod method, DefectCase defect, int R_a, int K, int N,
                                  const PairPotential& phi) {
  if (R_a < 1 || K < 0 || N < 1) throw std::invalid_argument("coarse problem needs R_a >= 1, K >= 0, N >= 1");
  FEMesh mesh;
  Blend2D blend;
  if (method == CoarseMethod::atm) {
    mesh = build_lattice_mesh(N);
    blend = Blend2D::constant(1.0);
  } else {
    mesh = build_graded_mesh(R_a, K, N);
    blend = K > 0 && method == CoarseMethod::bqcf ? Blend2D::hexagonal(R_a, R_a + K, SplineKind::cubic)
                                                  : Blend2D::indicator(R_a);
  }

  const auto sites = defect_sites(defect);
  std::vector<char> vacancy(static_cast<std::size_t>(mesh.num_nodes()), 0);
  std::vector<double> beta(static_cast<std::size_t>(mesh.num_nodes()), 0.0);
  int found = 0;
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const auto sk = static_cast<std::size_t>(k);
    if (!mesh.fine[sk]) continue;
    const auto& s = mesh.site[sk];
    beta[sk] = blend.at_site(s.i, s.j, mesh.nodes[sk]);
    if (std::find(sites.begin(), sites.end(), s) != sites.end()) {
      vacancy[sk] = 1;
      ++found;
    }
  }
  if (found != static_cast<int>(sites.size())) throw std::invalid_argument("defect does not fit in the mesh");

  // vacancies and the triangles touching them must sit where beta = 1
  for (const auto& tri : mesh.triangles) {
    bool touches = false;
    for (int v : tri) touches = touches || vacancy[static_cast<std::size_t>(v)];
    if (!touches) continue;
    for (int v : tri) {
      if (!mesh.pinned[static_cast<std::size_t>(v)] && beta[static_cast<std::size_t>(v)] < 1.0) {
        throw std::invalid_argument("defect reaches the blending region; increase R_a");
      }
    }
  }

  auto bonds = mesh_bond_table(mesh, N, vacancy);
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const auto sk = static_cast<std::size_t>(k);
    if (beta[sk] == 0.0 || mesh.pinned[sk] || vacancy[sk]) continue;
    const auto& s = mesh.site[sk];
    for (int d = 0; d < kNumDirections; ++d) {
      if (bonds[sk][static_cast<std::size_t>(d)] != -1) continue;
      const LatticeCoord c{s.i + kDirections[static_cast<std::size_t>(d)].i, s.j + kDirections[static_cast<std::size_t>(d)].j};
      if (std::find(sites.begin(), sites.end(), c) == sites.end()) {
        throw std::logic_error("atomistic node without its neighbours in the fine region");
      }
    }
  }

  const Mat2 B = defect_strain(defect, phi);
  const Mat2 B0 = ground_state_stretch(phi) * Mat2::Identity();
  ForceModel2D model(std::move(mesh), std::move(bonds), std::move(beta), std::move(vacancy), phi, B);
  return CoarseProblem{method, defect, R_a, K, N, B0, B, blend, std::move(model)};
}

double coarse_energy_cb(const CoarseProblem& problem, const Eigen::VectorXd& u) {
  return problem.model.continuum_energy(u);
}

Eigen::VectorXd coarse_forces_bqcf(const CoarseProblem& problem, const Eigen::VectorXd& u) {
  return problem.model.forces(u);
}

CoarseSolution solve_coarse(CoarseProblem& problem, int steps, double tol, int max_iter) {
  if (steps < 1) throw std::invalid_argument("solve_coarse needs at least one load step");
  NewtonOptions opt;
  opt.tol = tol;
  opt.blowup = std::numeric_limits<double>::infinity();
  opt.guard_definiteness = false;
  opt.check_final_definiteness = false;
  opt.max_iter = max_iter;
  opt.max_halvings = 10;

  auto& model = problem.model;
  const auto solve = [&](Eigen::VectorXd& x) {
    return newton_solve([&](const Eigen::VectorXd& v) { return model.residual(model.expand(v)); },
                        [&](const Eigen::VectorXd& v) { return model.jacobian(model.expand(v)); }, x, opt);
  };
  CoarseSolution out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(model.num_free_dofs());
  int failed = 0;
  for (int s = 1; s <= steps && failed == 0; ++s) {
    const double t = static_cast<double>(s) / steps;
    model.set_B(problem.B0 + t * (problem.B - problem.B0));
    out.report = solve(x);
    out.newton_iterations += out.report.iterations;
    ++out.load_steps;
    if (!out.report.converged) failed = s;
  }
  if (failed > 0) {
    // direct solve at B from y = Bx
    const double last = out.report.residual;
    model.set_B(problem.B);
    x.setZero();
    out.report = solve(x);
    out.newton_iterations += out.report.iterations;
    out.load_steps = 1;
    if (!out.report.converged) {
      throw std::runtime_error("coarse solve: load step " + std::to_string(failed) + " did not converge (residual " +
                               std::to_string(last) + ") and the direct solve stalled at " +
                               std::to_string(out.report.residual));
    }
  }
  out.u = model.expand(x);
  return out;
}

ReferenceSolution reference_solution(DefectCase defect, int R_ref, const PairPotential& phi, double tol) {
  ReferenceSolution ref{make_coarse_problem(CoarseMethod::bqcf, defect, R_ref, phi), {}};
  ref.solution = solve_coarse(ref.problem, 4, tol);
  return ref;
}

std::vector<char> active_triangles(const CoarseProblem& problem) {
  const auto& mesh = problem.model.mesh();
  std::vector<char> active(mesh.triangles.size(), 1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int v : mesh.triangles[t]) {
      if (problem.model.is_vacancy(v)) active[t] = 0;
    }
  }
  return active;
}

namespace {

using Polygon = std::vector<Vec2>;

// Sutherland-Hodgman clip of a convex polygon against a CCW triangle.
Polygon clip(Polygon poly, const std::array<Vec2, 3>& tri) {
  for (int e = 0; e < 3 && !poly.empty(); ++e) {
    const Vec2& p = tri[static_cast<std::size_t>(e)];
    const Vec2 edge = tri[static_cast<std::size_t>((e + 1) % 3)] - p;
    Polygon out;
    out.reserve(poly.size() + 1);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2& a = poly[k];
      const Vec2& b = poly[(k + 1) % poly.size()];
      const double da = cross(edge, a - p);
      const double db = cross(edge, b - p);
      if (da >= 0.0) out.push_back(a);
      if ((da >= 0.0) != (db >= 0.0)) out.push_back(a + (da / (da - db)) * (b - a));
    }
    poly = std::move(out);
  }
  return poly;
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) a += cross(poly[k], poly[(k + 1) % poly.size()]);
  return 0.5 * a;
}

std::vector<Mat2> displacement_gradients(const FEMesh& mesh, const Eigen::VectorXd& u, const std::vector<char>& active) {
  if (u.size() != 2 * mesh.num_nodes() || active.size() != mesh.triangles.size()) {
    throw std::invalid_argument("energy norm: field does not match mesh");
  }
  std::vector<Mat2> g(mesh.triangles.size(), Mat2::Zero());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (!active[t]) continue;
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles[t][static_cast<std::size_t>(k)];
      g[t] += Vec2(u[2 * v], u[2 * v + 1]) * mesh.geometry[t].grad[static_cast<std::size_t>(k)].transpose();
    }
  }
  return g;
}

// Triangles bucketed on dyadic grids: a triangle of extent <= 2^l lives in level l.
class TriangleGrid {
 public:
  explicit TriangleGrid(const FEMesh& mesh) : mesh_(mesh) {
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto [lo, hi] = bbox(t);
      const double extent = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1.0});
      const int level = static_cast<int>(std::ceil(std::log2(extent)));
      auto& cells = levels_[level];
      const double size = std::ldexp(1.0, level);
      for (int64_t ix = cell(lo.x(), size); ix <= cell(hi.x(), size); ++ix) {
        for (int64_t iy = cell(lo.y(), size); iy <= cell(hi.y(), size); ++iy) cells[key(ix, iy)].push_back(t);
      }
    }
  }

  template <class Fn>
  void for_overlapping(const Vec2& lo, const Vec2& hi, std::vector<int>& stamp, int tag, Fn&& fn) const {
    for (const auto& [level, cells] : levels_) {
      const double size = std::ldexp(1.0, level);
      for (int64_t ix = cell(lo.x(), size); ix <= cell(hi.x(), size); ++ix) {
        for (int64_t iy = cell(lo.y(), size); iy <= cell(hi.y(), size); ++iy) {
          const auto it = cells.find(key(ix, iy));
          if (it == cells.end()) continue;
          for (int t : it->second) {
            if (stamp[static_cast<std::size_t>(t)] == tag) continue;
            stamp[static_cast<std::size_t>(t)] = tag;
            fn(t);
          }
        }
      }
    }
  }

  std::pair<Vec2, Vec2> bbox(int t) const {
    const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
    Vec2 lo = mesh_.nodes[static_cast<std::size_t>(tri[0])];
    Vec2 hi = lo;
    for (int k = 1; k < 3; ++k) {
      lo = lo.cwiseMin(mesh_.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])]);
      hi = hi.cwiseMax(mesh_.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])]);
    }
    return {lo, hi};
  }

 private:
  static int64_t cell(double x, double size) { return static_cast<int64_t>(std::floor(x / size)); }
  static uint64_t key(int64_t ix, int64_t iy) {
    return (static_cast<uint64_t>(ix) << 32) ^ static_cast<uint32_t>(static_cast<int32_t>(iy));
  }

  const FEMesh& mesh_;
  std::map<int, std::unordered_map<uint64_t, std::vector<int>>> levels_;
};

std::array<Vec2, 3> corners(const FEMesh& mesh, int t) {
  const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
  return {mesh.nodes[static_cast<std::size_t>(tri[0])], mesh.nodes[static_cast<std::size_t>(tri[1])],
          mesh.nodes[static_cast<std::size_t>(tri[2])]};
}

}  // namespace

double energy_norm_error(const FEMesh& mesh_h, const Eigen::VectorXd& u_h, const std::vector<char>& active_h,
                         const FEMesh& mesh_ref, const Eigen::VectorXd& u_ref, const std::vector<char>& active_ref) {
  const auto g_h = displacement_gradients(mesh_h, u_h, active_h);
  const auto g_ref = displacement_gradients(mesh_ref, u_ref, active_ref);
  const TriangleGrid grid(mesh_ref);
  std::vector<double> covered_ref(mesh_ref.triangles.size(), 0.0);
  std::vector<int> stamp(mesh_ref.triangles.size(), -1);
  double sum = 0.0;
  for (int t = 0; t < mesh_h.num_triangles(); ++t) {
    const auto tri = corners(mesh_h, t);
    Vec2 lo = tri[0].cwiseMin(tri[1]).cwiseMin(tri[2]);
    Vec2 hi = tri[0].cwiseMax(tri[1]).cwiseMax(tri[2]);
    double covered = 0.0;
    grid.for_overlapping(lo, hi, stamp, t, [&](int s) {
      const auto sc = corners(mesh_ref, s);
      const double a = std::max(0.0, polygon_area(clip(Polygon(sc.begin(), sc.end()), tri)));
      if (a == 0.0) return;
      covered += a;
      covered_ref[static_cast<std::size_t>(s)] += a;
      sum += a * (g_h[static_cast<std::size_t>(t)] - g_ref[static_cast<std::size_t>(s)]).squaredNorm();
    });
    const double outside = std::max(0.0, mesh_h.geometry[static_cast<std::size_t>(t)].area - covered);
    sum += outside * g_h[static_cast<std::size_t>(t)].squaredNorm();
  }
  for (std::size_t s = 0; s < mesh_ref.triangles.size(); ++s) {
    const double outside = std::max(0.0, mesh_ref.geometry[s].area - covered_ref[s]);
    sum += outside * g_ref[s].squaredNorm();
  }
  return std::sqrt(sum);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("slope fit needs positive data");
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

BenchmarkResult run_benchmark(DefectCase defect, const std::vector<CoarseMethod>& methods,
                              const std::vector<int>& R_a_list, const PairPotential& phi, int R_ref, int threads) {
  if (methods.empty() || R_a_list.empty()) throw std::invalid_argument("benchmark needs methods and radii");
  const ReferenceSolution ref = reference_solution(defect, R_ref, phi);
  const auto active_ref = active_triangles(ref.problem);

  BenchmarkResult out;
  out.reference_dof = ref.problem.dof();
  const int rows = static_cast<int>(methods.size() * R_a_list.size());
  out.records.resize(static_cast<std::size_t>(rows));
  parallel_for(rows, threads, [&](int row) {
    const CoarseMethod method = methods[static_cast<std::size_t>(row) / R_a_list.size()];
    const int R_a = R_a_list[static_cast<std::size_t>(row) % R_a_list.size()];
    CoarseProblem p = make_coarse_problem(method, defect, R_a, phi);
    BenchmarkRecord rec{method, defect, R_a, p.K, p.N, p.dof(), std::numeric_limits<double>::quiet_NaN(), false};
    try {
      const CoarseSolution sol = solve_coarse(p);
      rec.error = energy_norm_error(p.model.mesh(), sol.u, active_triangles(p), ref.problem.model.mesh(),
                                    ref.solution.u, active_ref);
      rec.converged = true;
    } catch (const std::runtime_error&) {
      rec.converged = false;
    }
    out.records[static_cast<std::size_t>(row)] = rec;
  });

  for (const CoarseMethod m : methods) {
    std::vector<double> x, y;
    for (const auto& r : out.records) {
      if (r.method == m && r.converged && r.error > 0.0) {
        x.push_back(r.dof);
        y.push_back(r.error);
      }
    }
    out.slopes.push_back(x.size() >= 2 ? loglog_slope(x, y) : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace bqcf
