#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bqcf/operators2d.hpp"
#include "bqcf/stability.hpp"
#include "test_support.hpp"

using namespace bqcf;

namespace {

Mat2 sample_strain() {
  Mat2 B;
  B << 1.02, 0.01, -0.015, 0.99;
  return B;
}

// Symbol of the periodic atomistic Hessian at wave numbers (m1, m2)
Mat2 atomistic_symbol(const PairPotential& phi, const Mat2& B, int N, int m1, int m2) {
  const VectorPairPotential vphi(phi);
  Mat2 D = Mat2::Zero();
  for (int d = 0; d < kNumDirections; ++d) {
    const auto& c = kDirections[static_cast<std::size_t>(d)];
    const double theta = 2.0 * M_PI * (m1 * c.i + m2 * c.j) / N;
    D += (1.0 - std::cos(theta)) * vphi.hess(B * direction_vector(d));
  }
  return D;
}

}  // namespace

TEST(CauchyBorn, EnergyIsAtomisticEnergyPerCell) {
  const PairPotential phi(4.0);
  const VectorPairPotential vphi(phi);
  const CauchyBornDensity W(phi);
  const Mat2 B = sample_strain();
  double per_atom = 0.0;
  for (int d = 0; d < kNumDirections; ++d) per_atom += 0.5 * vphi.energy(B * direction_vector(d));
  EXPECT_NEAR(W.energy(B) * primitive_cell_volume(), per_atom, 1e-14);
  EXPECT_NEAR(primitive_cell_volume(), std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(CauchyBorn, StressAndSecondVariationMatchFiniteDifferences) {
  const CauchyBornDensity W(PairPotential(3.0));
  const Mat2 G = sample_strain();
  Mat2 H;
  H << 0.3, -0.2, 0.5, 0.1;
  const double h = 1e-5;
  const Mat2 S = W.stress(G);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Mat2 E = Mat2::Zero();
      E(a, b) = h;
      EXPECT_NEAR(S(a, b), (W.energy(G + E) - W.energy(G - E)) / (2 * h), 1e-8);
    }
  }
  const double fd2 = (W.energy(G + h * H) - 2.0 * W.energy(G) + W.energy(G - h * H)) / (h * h);
  EXPECT_NEAR(W.second_variation(G, H), fd2, 1e-4);
}

// frozen: root of phi'(s) + sqrt(3) phi'(sqrt(3) s) computed by Brent's method
TEST(CauchyBorn, GroundStateStretch) {
  EXPECT_NEAR(ground_state_stretch(PairPotential(3.0)), 0.94324149473023, 1e-12);
  EXPECT_NEAR(ground_state_stretch(PairPotential(4.0)), 0.9778373826795084, 1e-12);
  const double s0 = ground_state_stretch(PairPotential(4.0));
  EXPECT_LT(CauchyBornDensity(PairPotential(4.0)).stress(s0 * Mat2::Identity()).norm(), 1e-12);
}

TEST(CauchyBorn, RejectsInvertedStrain) {
  Mat2 B;
  B << -1.0, 0.0, 0.0, 1.0;
  EXPECT_THROW(HomogeneousStrain{B}, std::invalid_argument);
}

TEST(ForceModel2D, ForcesAreNegativeEnergyGradients) {
  const PairPotential phi(4.0);
  const auto lat = TriangularLattice::dirichlet_hexagon(8);
  const VacancySet vac(lat, divacancy_sites());
  const auto model = make_lattice_model(lat, vac, phi, Blend2D::radial(1.0, 3.0, SplineKind::quintic), sample_strain());
  Eigen::VectorXd u = model.expand(check::random_vector(model.num_free_dofs(), 0.02, 3));
  const Eigen::VectorXd ga =
      check::fd_gradient([&](const Eigen::VectorXd& v) { return model.atomistic_energy(v); }, u);
  const Eigen::VectorXd gc =
      check::fd_gradient([&](const Eigen::VectorXd& v) { return model.continuum_energy(v); }, u);
  const Eigen::VectorXd fa = model.atomistic_forces(u);
  const Eigen::VectorXd fc = model.continuum_forces(u);
  for (int node : model.free_nodes()) {
    for (int c = 0; c < 2; ++c) {
      EXPECT_NEAR(fa[2 * node + c], -ga[2 * node + c], 1e-6);
      EXPECT_NEAR(fc[2 * node + c], -gc[2 * node + c], 1e-6);
    }
  }
}

TEST(ForceModel2D, JacobianMatchesFiniteDifferences) {
  const PairPotential phi(3.0);
  const auto lat = TriangularLattice::dirichlet_hexagon(10);
  const VacancySet vac(lat, microcrack_sites(1));
  for (const auto& blend : {Blend2D::radial(2.0, 4.0, SplineKind::quintic), Blend2D::indicator(2),
                            Blend2D::constant(1.0)}) {
    const auto model = make_lattice_model(lat, vac, phi, blend, sample_strain());
    const Eigen::VectorXd x = check::random_vector(model.num_free_dofs(), 0.01, 11);
    const Eigen::MatrixXd J = Eigen::MatrixXd(model.jacobian(model.expand(x)));
    const Eigen::MatrixXd Jfd =
        -check::fd_jacobian([&](const Eigen::VectorXd& v) { return model.residual(model.expand(v)); }, x);
    EXPECT_LT(check::rel_diff(J, Jfd), 1e-5);
  }
}

TEST(ForceModel2D, ExpandAndRestrictRoundTrip) {
  const auto lat = TriangularLattice::dirichlet_hexagon(8);
  const auto model = make_lattice_model(lat, VacancySet(), PairPotential(3.0), Blend2D::constant(1.0), Mat2::Identity());
  const Eigen::VectorXd x = check::random_vector(model.num_free_dofs(), 1.0, 5);
  EXPECT_EQ(model.restrict_to_free(model.expand(x)), x);
  EXPECT_EQ(model.num_free_dofs(), 2 * 37);
}

// ghost-force-free: y = Bx is an equilibrium for every region split
TEST(Operators2D, PatchTest) {
  const PairPotential phi(4.0);
  const int N = 32;
  const auto lat = TriangularLattice::dirichlet_hexagon(N);
  const Mat2 B = sample_strain();
  const VectorPairPotential vphi(phi);
  double scale = 0.0;
  for (int d = 0; d < kNumDirections; ++d) scale += vphi.grad(B * direction_vector(d)).norm();
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(2 * lat.num_sites());
  double worst = 0.0;
  for (int R_a = 0; R_a < N / 2 - 1; ++R_a) {
    worst = std::max(worst, force_bqcf_2d(lat, {}, phi, Blend2D::indicator(R_a), B, u0).cwiseAbs().maxCoeff());
    for (int R_b = R_a + 1; R_b < N / 2; ++R_b) {
      const auto f = force_bqcf_2d(lat, {}, phi, Blend2D::radial(R_a, R_b, SplineKind::quintic), B, u0);
      worst = std::max(worst, f.cwiseAbs().maxCoeff());
    }
  }
  EXPECT_LE(worst / scale, 1e-12);
}

TEST(Operators2D, PeriodicAtomisticSpectrumMatchesSymbol) {
  const PairPotential phi(4.0);
  const int N = 8;
  const Mat2 B = sample_strain();
  double lam_min = 1e300;
  for (int m1 = 0; m1 < N; ++m1) {
    for (int m2 = 0; m2 < N; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      Eigen::SelfAdjointEigenSolver<Mat2> es(atomistic_symbol(phi, B, N, m1, m2));
      lam_min = std::min(lam_min, es.eigenvalues()[0]);
    }
  }
  const auto op = assemble_La_2d(TriangularLattice::periodic(N), {}, B, phi);
  EXPECT_NEAR(min_eig_sym(op).value, lam_min, 1e-10 * op.norm_inf_sym());
}

TEST(Operators2D, NearestNeighbourModelsCoincide) {
  const PairPotential phi(4.0, 1);
  const auto lat = TriangularLattice::dirichlet_hexagon(12);
  const Mat2 B = sample_strain();
  const Eigen::MatrixXd La = check::dense(assemble_La_2d(lat, {}, B, phi));
  EXPECT_LT(check::rel_diff(La, check::dense(assemble_Lc_2d(lat, B, phi))), 1e-13);
  EXPECT_LT(check::rel_diff(La, check::dense(assemble_Lbqcf_2d(lat, B, phi, Blend2D::radial(1, 3, SplineKind::cubic)))),
            1e-13);
}

TEST(Operators2D, BlendedOperatorIsRowBlend) {
  const PairPotential phi(3.0);
  const auto lat = TriangularLattice::dirichlet_hexagon(14);
  const Mat2 B = sample_strain();
  const auto blend = Blend2D::radial(2.0, 5.0, SplineKind::quintic);
  const auto La = assemble_La_2d(lat, {}, B, phi);
  const Eigen::MatrixXd A = check::dense(La);
  const Eigen::MatrixXd C = check::dense(assemble_Lc_2d(lat, B, phi));
  const Eigen::MatrixXd Bq = check::dense(assemble_Lbqcf_2d(lat, B, phi, blend));
  const auto beta = blend_weights(lat, blend);
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const double b = beta[static_cast<std::size_t>(La.free_sites[static_cast<std::size_t>(r / 2)])];
    EXPECT_LT((Bq.row(r) - (b * A.row(r) + (1.0 - b) * C.row(r))).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Operators2D, TranslationInvariance) {
  const PairPotential phi(3.0);
  const auto lat = TriangularLattice::periodic(8);
  const Mat2 B = sample_strain();
  const auto blend = Blend2D::radial(1.0, 3.0, SplineKind::quintic);
  const Eigen::VectorXd u = check::random_vector(2 * lat.num_sites(), 1e-2, 9);
  Eigen::VectorXd shift(u.size());
  for (Eigen::Index k = 0; k < u.size(); k += 2) {
    shift[k] = 0.3;
    shift[k + 1] = -0.7;
  }
  EXPECT_LT((force_bqcf_2d(lat, {}, phi, blend, B, u + shift) - force_bqcf_2d(lat, {}, phi, blend, B, u))
                .cwiseAbs()
                .maxCoeff(),
            1e-11);
  for (const auto& op : {assemble_La_2d(lat, {}, B, phi), assemble_Lc_2d(lat, B, phi),
                         assemble_Lbqcf_2d(lat, B, phi, blend)}) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(op.dim());
    for (Eigen::Index k = 0; k < t.size(); k += 2) t[k] = 1.0;
    EXPECT_LT((op.matrix * t).cwiseAbs().maxCoeff(), 1e-11 * op.norm_inf_sym());
  }
}

TEST(Operators2D, SparseEigenvaluesMatchDense) {
  const PairPotential phi(4.0);
  const auto lat = TriangularLattice::dirichlet_hexagon(16);
  Mat2 B;
  B << 1.0, 0.0, 0.15, 1.0;
  for (const auto& op : {assemble_La_2d(lat, {}, B, phi), assemble_Lc_2d(lat, B, phi),
                         assemble_Lbqcf_2d(lat, B, phi, Blend2D::radial(2.0, 5.0, SplineKind::quintic)),
                         assemble_Lbqcf_2d(lat, B, phi, Blend2D::indicator(3))}) {
    ASSERT_LE(op.dim(), kDenseEigenLimit);
    const double dense = min_eig_sym_dense(op).value;
    const auto sparse = min_eig_sym_sparse(op);
    EXPECT_LE(std::abs(sparse.value - dense), 1e-10 * op.norm_inf_sym());
    EXPECT_EQ(is_positive_definite(op), dense > 0.0);
  }
}

TEST(Operators2D, VacancyNodesCarryNoForce) {
  const PairPotential phi(4.0);
  const auto lat = TriangularLattice::dirichlet_hexagon(10);
  const VacancySet vac(lat, divacancy_sites());
  const auto model = make_lattice_model(lat, vac, phi, Blend2D::constant(1.0), sample_strain());
  const Eigen::VectorXd f = model.forces(model.zero_state());
  for (int id : vac.ids()) {
    EXPECT_EQ(f[2 * id], 0.0);
    EXPECT_EQ(f[2 * id + 1], 0.0);
    EXPECT_LT(model.free_index(id), 0);
  }
  // the defect breaks the patch test
  EXPECT_GT(f.cwiseAbs().maxCoeff(), 1e-3);
}
