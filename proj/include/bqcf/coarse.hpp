#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bqcf/blending.hpp"
#include "bqcf/lattice2d.hpp"
#include "bqcf/mesh.hpp"
#include "bqcf/operators2d.hpp"
#include "bqcf/potential.hpp"
#include "bqcf/stability.hpp"

namespace bqcf {

/// Element size target of the graded mesh at hexagon radius rho.
double graded_element_size(double rho, double R_b);

/// Lattice triangulation of Hex(R) plus hexagonal rings out to Hex(N).
///
/// Nodes 0..n_fine-1 are the lattice sites of Hex(R_b + 2) with R_b = R_a + K.
/// The rings have hexagon radii rho_0 = R_b + 2 < rho_1 < ... < rho_M = N with
/// spacing graded_element_size(rho_m) and a non-increasing number of segments per
/// side; neighbouring rings are joined by a zipper triangulation of each side.
/// The outer ring is pinned. Throws std::invalid_argument unless R_a + K + 2 < N.
FEMesh build_graded_mesh(int R_a, int K, int N);

/// Every lattice site of Hex(N); the ring hex_norm == N is pinned.
FEMesh build_lattice_mesh(int N);

enum class CoarseMethod { atm, qcf, bqcf };
enum class DefectCase { divacancy, microcrack };

CoarseMethod parse_coarse_method(std::string_view name);
DefectCase parse_defect_case(std::string_view name);
std::string_view to_string(CoarseMethod method);
std::string_view to_string(DefectCase defect);

/// Vacancy set of a defect case; the micro-crack has 11 atoms.
std::vector<LatticeCoord> defect_sites(DefectCase defect);
/// Far-field strain F * B0 with F = [[1.03, 0.03], [0, 1.03]] (di-vacancy) or
/// [[1, 0.03], [0, 1.03]] (micro-crack), B0 = s0 I.
Mat2 defect_strain(DefectCase defect, const PairPotential& phi);

/// Coarse-grained problem: mesh, weights and force model at the far-field strain.
struct CoarseProblem {
  CoarseMethod method = CoarseMethod::bqcf;
  DefectCase defect = DefectCase::divacancy;
  int R_a = 0;
  int K = 0;
  int N = 0;
  Mat2 B0 = Mat2::Identity();
  Mat2 B = Mat2::Identity();
  Blend2D blend;
  ForceModel2D model;

  int dof() const { return model.num_free_dofs(); }
};

/// K and N follow the method: bqcf K = R_a, N = R_a^2 with a hexagonal cubic
/// blend from Hex(R_a) to Hex(R_a + K); qcf uses the same mesh with the indicator
/// of Hex(R_a); atm N = R_a on the full lattice with beta = 1. Throws
/// std::invalid_argument when a triangle touching a vacancy reaches a node with beta < 1.
CoarseProblem make_coarse_problem(CoarseMethod method, DefectCase defect, int R_a, const PairPotential& phi);
/// Explicit K and N. The mesh is fine out to Hex(R_a + K + 2); qcf, and bqcf
/// with K = 0, use the indicator blend.
CoarseProblem make_coarse_problem(CoarseMethod method, DefectCase defect, int R_a, int K, int N,
                                  const PairPotential& phi);

/// Bond table of a mesh whose fine nodes are lattice sites: absent neighbours
/// outside Hex(N) are ghosts, vacancies and other absent sites are -1.
ForceModel2D::BondTable mesh_bond_table(const FEMesh& mesh, int N, const std::vector<char>& vacancy);

/// Sum over active triangles of vol(T) W(grad y_h|_T) for the nodal displacement u.
double coarse_energy_cb(const CoarseProblem& problem, const Eigen::VectorXd& u);
/// Blended forces at all nodes (zero on constrained nodes).
Eigen::VectorXd coarse_forces_bqcf(const CoarseProblem& problem, const Eigen::VectorXd& u);

struct CoarseSolution {
  Eigen::VectorXd u;                 ///< nodal displacement from y = Bx
  NewtonReport report;               ///< last load step
  int load_steps = 0;
  int newton_iterations = 0;         ///< summed over load steps
};

/// Damped Newton (backtracking on ||F||_2, up to 10 halvings) through `steps`
/// equal load increments from B0 to B, starting from y = B0 x. When a step
/// fails, a single solve at B from y = Bx is attempted (load_steps is then 1).
/// Throws std::runtime_error when that fails too.
CoarseSolution solve_coarse(CoarseProblem& problem, int steps = 4, double tol = 1e-5, int max_iter = 60);

/// Large B-QCF solve used as the proxy for the atomistic solution.
struct ReferenceSolution {
  CoarseProblem problem;
  CoarseSolution solution;
};
ReferenceSolution reference_solution(DefectCase defect, int R_ref, const PairPotential& phi, double tol = 1e-8);

/// || grad u_h - grad u_ref ||_{L^2(R^2)} for P1 displacements on two meshes,
/// each extended by zero outside its mesh. Triangles flagged inactive carry a
/// zero gradient. The integral is exact: every pair of overlapping triangles is
/// clipped against each other.
double energy_norm_error(const FEMesh& mesh_h, const Eigen::VectorXd& u_h, const std::vector<char>& active_h,
                         const FEMesh& mesh_ref, const Eigen::VectorXd& u_ref, const std::vector<char>& active_ref);
/// Triangles of the problem's mesh that do not touch a vacancy.
std::vector<char> active_triangles(const CoarseProblem& problem);

struct BenchmarkRecord {
  CoarseMethod method = CoarseMethod::bqcf;
  DefectCase defect = DefectCase::divacancy;
  int R_a = 0;
  int K = 0;
  int N = 0;
  int dof = 0;
  double error = 0.0;
  bool converged = false;
};

struct BenchmarkResult {
  std::vector<BenchmarkRecord> records;
  /// Least-squares slope of log(error) against log(dof), per entry of `methods`.
  std::vector<double> slopes;
  int reference_dof = 0;
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Records ordered by method (as given) then R_a. Rows run in parallel on
/// `threads` workers; the result does not depend on the schedule.
BenchmarkResult run_benchmark(DefectCase defect, const std::vector<CoarseMethod>& methods,
                              const std::vector<int>& R_a_list, const PairPotential& phi, int R_ref,
                              int threads = 1);

}  // namespace bqcf
