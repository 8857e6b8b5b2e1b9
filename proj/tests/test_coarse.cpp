#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "bqcf/coarse.hpp"
#include "test_support.hpp"

using namespace bqcf;

namespace {

double mesh_area(const FEMesh& mesh) {
  double a = 0.0;
  for (const auto& g : mesh.geometry) a += g.area;
  return a;
}

Eigen::VectorXd linear_field(const FEMesh& mesh, const Mat2& G) {
  Eigen::VectorXd u(2 * mesh.num_nodes());
  for (int k = 0; k < mesh.num_nodes(); ++k) u.segment<2>(2 * k) = G * mesh.nodes[static_cast<std::size_t>(k)];
  return u;
}

}  // namespace

TEST(GradedMesh, CoversTheHexagon) {
  for (const auto& [R_a, K, N] : {std::tuple{4, 4, 16}, std::tuple{6, 6, 36}, std::tuple{8, 3, 50}}) {
    const auto mesh = build_graded_mesh(R_a, K, N);
    EXPECT_NEAR(mesh_area(mesh), 1.5 * std::sqrt(3.0) * N * N, 1e-8 * N * N);
    EXPECT_GE(mesh.min_angle_degrees(), 20.0);
    int fine = 0;
    for (int k = 0; k < mesh.num_nodes(); ++k) fine += mesh.fine[static_cast<std::size_t>(k)] ? 1 : 0;
    const int Rf = R_a + K + 2;
    EXPECT_GE(fine, 3 * Rf * (Rf + 1) + 1);
  }
  EXPECT_THROW(build_graded_mesh(4, 4, 10), std::invalid_argument);
}

TEST(GradedMesh, CoarseningReducesDof) {
  const int R = 8;
  const int coarse = build_graded_mesh(R, R, R * R).num_nodes();
  const int full = build_lattice_mesh(R * R).num_nodes();
  EXPECT_LT(coarse * 5, full);
  EXPECT_DOUBLE_EQ(graded_element_size(4.0, 8.0), 1.0);
  EXPECT_DOUBLE_EQ(graded_element_size(32.0, 8.0), 8.0);
}

TEST(LatticeMesh, AreaAndPinnedRing) {
  const int N = 6;
  const auto mesh = build_lattice_mesh(N);
  EXPECT_EQ(mesh.num_nodes(), 3 * N * (N + 1) + 1);
  EXPECT_NEAR(mesh_area(mesh), 1.5 * std::sqrt(3.0) * N * N, 1e-10);
  int pinned = 0;
  for (int k = 0; k < mesh.num_nodes(); ++k) pinned += mesh.pinned[static_cast<std::size_t>(k)] ? 1 : 0;
  EXPECT_EQ(pinned, 6 * N);
  EXPECT_NEAR(mesh.min_angle_degrees(), 60.0, 1e-10);
}

TEST(MeshIO, RoundTrip) {
  const auto mesh = build_graded_mesh(3, 3, 12);
  std::stringstream ss;
  write_mesh(ss, mesh);
  const auto back = read_mesh(ss);
  ASSERT_EQ(back.num_nodes(), mesh.num_nodes());
  ASSERT_EQ(back.num_triangles(), mesh.num_triangles());
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const auto sk = static_cast<std::size_t>(k);
    EXPECT_LT((back.nodes[sk] - mesh.nodes[sk]).norm(), 1e-12);
    EXPECT_EQ(back.fine[sk], mesh.fine[sk]);
    if (mesh.fine[sk]) EXPECT_EQ(back.site[sk], mesh.site[sk]);
  }
  EXPECT_EQ(back.triangles, mesh.triangles);
  std::istringstream bad("nodes 2 triangles");
  EXPECT_THROW(read_mesh(bad), std::exception);
}

TEST(EnergyNorm, LinearFields) {
  const auto mesh = build_graded_mesh(3, 3, 12);
  const auto fine = build_lattice_mesh(12);
  const std::vector<char> on(static_cast<std::size_t>(mesh.num_triangles()), 1);
  const std::vector<char> on_fine(static_cast<std::size_t>(fine.num_triangles()), 1);
  Mat2 G1, G2;
  G1 << 0.01, 0.02, -0.03, 0.005;
  G2 << -0.02, 0.0, 0.01, 0.015;
  const auto u1 = linear_field(mesh, G1);
  EXPECT_NEAR(energy_norm_error(mesh, u1, on, mesh, u1, on), 0.0, 1e-7);
  // same field on a different triangulation of the same hexagon
  EXPECT_NEAR(energy_norm_error(mesh, u1, on, fine, linear_field(fine, G1), on_fine), 0.0, 1e-7);
  const double expected = (G1 - G2).norm() * std::sqrt(mesh_area(mesh));
  EXPECT_NEAR(energy_norm_error(mesh, u1, on, fine, linear_field(fine, G2), on_fine), expected, 1e-9 * expected);
}

// y = Bx is an equilibrium of the coarse blended model without defects
TEST(CoarseModel, PatchTest) {
  const PairPotential phi(4.0);
  const int R_a = 4, K = 4, N = 24;
  auto mesh = build_graded_mesh(R_a, K, N);
  const std::vector<char> vacancy(static_cast<std::size_t>(mesh.num_nodes()), 0);
  auto bonds = mesh_bond_table(mesh, N, vacancy);
  const auto blend = Blend2D::hexagonal(R_a, R_a + K, SplineKind::cubic);
  std::vector<double> beta(static_cast<std::size_t>(mesh.num_nodes()), 0.0);
  for (int k = 0; k < mesh.num_nodes(); ++k) {
    const auto sk = static_cast<std::size_t>(k);
    if (mesh.fine[sk]) beta[sk] = blend.at_site(mesh.site[sk].i, mesh.site[sk].j, mesh.nodes[sk]);
  }
  Mat2 B;
  B << 1.02, 0.03, 0.0, 0.99;
  const ForceModel2D model(std::move(mesh), std::move(bonds), std::move(beta), vacancy, phi, B);
  const auto f = model.forces(model.zero_state());
  EXPECT_LT(f.cwiseAbs().maxCoeff(), 1e-11);

  const Eigen::VectorXd x = check::random_vector(model.num_free_dofs(), 0.01, 4);
  const Eigen::MatrixXd J = Eigen::MatrixXd(model.jacobian(model.expand(x)));
  const Eigen::MatrixXd Jfd =
      -check::fd_jacobian([&](const Eigen::VectorXd& v) { return model.residual(model.expand(v)); }, x);
  EXPECT_LT(check::rel_diff(J, Jfd), 1e-5);
}

TEST(CoarseProblem, MethodsAndValidation) {
  const PairPotential phi(4.0);
  const auto b = make_coarse_problem(CoarseMethod::bqcf, DefectCase::divacancy, 6, phi);
  EXPECT_EQ(b.K, 6);
  EXPECT_EQ(b.N, 36);
  const auto q = make_coarse_problem(CoarseMethod::qcf, DefectCase::divacancy, 6, phi);
  EXPECT_EQ(q.dof(), b.dof());
  const auto a = make_coarse_problem(CoarseMethod::atm, DefectCase::divacancy, 6, phi);
  EXPECT_EQ(a.N, 6);
  EXPECT_EQ(a.dof(), 2 * (3 * 5 * 6 + 1 - 2));
  EXPECT_EQ(defect_sites(DefectCase::microcrack).size(), 11u);
  EXPECT_THROW(make_coarse_problem(CoarseMethod::bqcf, DefectCase::microcrack, 4, phi), std::invalid_argument);
  EXPECT_THROW(make_coarse_problem(CoarseMethod::bqcf, DefectCase::divacancy, 0, phi), std::invalid_argument);
  EXPECT_EQ(parse_coarse_method("qcf"), CoarseMethod::qcf);
  EXPECT_EQ(to_string(DefectCase::microcrack), "microcrack");
  EXPECT_THROW(parse_defect_case("crack"), std::invalid_argument);
}

TEST(CoarseProblem, SolveDivacancy) {
  auto p = make_coarse_problem(CoarseMethod::bqcf, DefectCase::divacancy, 4, PairPotential(4.0));
  const auto sol = solve_coarse(p);
  EXPECT_TRUE(sol.report.converged);
  EXPECT_EQ(sol.load_steps, 4);
  EXPECT_LT(p.model.residual(sol.u).cwiseAbs().maxCoeff(), 1e-5);
  // the vacancies relax the lattice
  EXPECT_GT(sol.u.cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Slope, LogLogFit) {
  const std::vector<double> x{10, 100, 1000, 10000};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  EXPECT_NEAR(loglog_slope(x, y), -1.5, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(loglog_slope({1.0, 2.0}, {1.0, -1.0}), std::invalid_argument);
}
