#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "bqcf/chain1d.hpp"
#include "bqcf/experiments.hpp"
#include "bqcf/stability.hpp"
#include "test_support.hpp"

using namespace bqcf;

namespace {

AssembledOperator scalar_operator(double value) {
  AssembledOperator op;
  op.matrix.resize(1, 1);
  op.matrix.insert(0, 0) = value;
  op.free_sites = {0};
  return op;
}

}  // namespace

TEST(Eigen, SparseAgreesWithDenseOnChains) {
  const PairPotential phi(3.0);
  for (double F : {1.0, 1.15, 1.25}) {
    const Chain1D chain(60, Boundary::dirichlet, F);
    const auto profile = BlendProfile1D::from_spline(SplineKind::quintic, 8, 60);
    for (const auto& op : {assemble_La_1d(chain, phi), assemble_Lqcl_1d(chain, phi),
                           assemble_Lbqcf_1d(chain, phi, profile)}) {
      const auto dense = min_eig_sym_dense(op);
      const auto sparse = min_eig_sym_sparse(op);
      EXPECT_LE(std::abs(dense.value - sparse.value), 1e-10 * op.norm_inf_sym());
      EXPECT_LE(sparse.residual, 1e-5 * op.norm_inf_sym());
      EXPECT_EQ(is_positive_definite(op), dense.value > 0.0);
    }
  }
}

TEST(Eigen, PeriodicSparseIsRejected) {
  const auto op = assemble_La_1d(Chain1D(8, Boundary::periodic, 1.0), PairPotential(3.0));
  EXPECT_THROW(min_eig_sym_sparse(op), std::invalid_argument);
}

TEST(Eigen, CriticalModeIsNormalised) {
  const Chain1D chain(30, Boundary::dirichlet, 1.1);
  const auto mode = critical_eigenmode(assemble_La_1d(chain, PairPotential(3.0)));
  EXPECT_NEAR(mode.cwiseAbs().maxCoeff(), 1.0, 1e-14);
  Eigen::Index k;
  mode.cwiseAbs().maxCoeff(&k);
  EXPECT_GT(mode[k], 0.0);
}

TEST(CriticalStrain, BracketInvariant) {
  const double gc = 1.2345678;
  const auto family = [&](double g) { return scalar_operator(gc - g); };
  const auto res = critical_strain_linear(family, 1.0, 0.01, 3.0, 1e-9);
  EXPECT_LT(res.gamma, gc);
  EXPECT_GE(res.first_unstable, gc);
  EXPECT_LE(res.first_unstable - res.gamma, 1e-9);
  EXPECT_TRUE(res.verified);
  for (const auto& [g, stable] : res.history) EXPECT_EQ(stable, g < gc) << g;
  EXPECT_THROW(critical_strain_linear(family, 1.3, 0.01, 3.0, 1e-9), std::runtime_error);
  EXPECT_THROW(critical_strain_linear(family, 1.0, 0.01, 1.1, 1e-9), std::runtime_error);
}

// frozen: independent bisection on the dense spectrum, tolerance 1e-12
TEST(CriticalStrain, ChainReferenceValues) {
  const auto q = run_expansion1d(50, 3.0, SplineKind::quintic, {8}, 1e-12);
  const auto c = run_expansion1d(50, 3.0, SplineKind::cubic, {8}, 1e-12);
  EXPECT_NEAR(q[0].gamma_a, 1.1972437917476058, 1e-10);
  EXPECT_NEAR(q[0].gamma_bqcf, 1.195003275041818, 1e-10);
  EXPECT_NEAR(c[0].gamma_bqcf, 1.1955047638452376, 1e-10);
}

TEST(CriticalStrain, ErrorDecreasesWithBlendWidth) {
  const auto rows = run_expansion1d(400, 3.0, SplineKind::quintic, {4, 8, 16, 32}, 1e-10);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_LT(rows[k].abs_err, rows[k - 1].abs_err) << rows[k].K;
    EXPECT_LE(rows[k].gamma_bqcf, rows[k].gamma_a + 1e-10);
  }
}

TEST(Newton, ConvergesOnLinearProblem) {
  const Eigen::VectorXd c = check::random_vector(5, 1.0, 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
  SparseMatrix I(5, 5);
  I.setIdentity();
  const auto rep = newton_solve([&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return c - v; },
                                [&](const Eigen::VectorXd&) { return I; }, x);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.iterations, 2);
  EXPECT_LT((x - c).norm(), 1e-12);
  EXPECT_TRUE(rep.positive_definite);
}

TEST(Newton, GuardsStopDivergence) {
  SparseMatrix I(2, 2);
  I.setIdentity();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  const auto indefinite = newton_solve([](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v.array() + 1.0; },
                                       [&](const Eigen::VectorXd&) -> SparseMatrix { return -I; }, x);
  EXPECT_FALSE(indefinite.converged);
  EXPECT_EQ(indefinite.reason, Divergence::indefinite);

  x.setZero();
  NewtonOptions opt;
  opt.residual_scale = 1000.0;
  const auto blowup = newton_solve([](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v.array() + 1.0; },
                                   [&](const Eigen::VectorXd&) { return I; }, x, opt);
  EXPECT_FALSE(blowup.converged);
  EXPECT_EQ(blowup.reason, Divergence::residual_blowup);
}

TEST(Parallel, ResultsDoNotDependOnThreadCount) {
  const auto run = [](int threads) {
    std::vector<double> out(97);
    parallel_for(97, threads, [&](int i) { out[static_cast<std::size_t>(i)] = std::sin(i) * i; });
    return out;
  };
  EXPECT_EQ(run(1), run(4));
  std::atomic<int> calls{0};
  parallel_for(10, 3, [&](int) { ++calls; });
  EXPECT_EQ(calls.load(), 10);
}

TEST(StabilityRegion, SyntheticDisc) {
  const StrainOperatorFamily disc = [](const Mat2& B) {
    const double s = B(0, 0) - 1.0, r = B(1, 1) - 1.0;
    return scalar_operator(0.005 - s * s - r * r);
  };
  const StrainOperatorFamily all = [](const Mat2&) { return scalar_operator(1.0); };
  std::vector<double> grid;
  for (int k = 0; k < 5; ++k) grid.push_back(-0.2 + 0.1 * k);
  const auto reg = stability_region({{"disc", disc}, {"all", all}}, grid, grid, 0.1, 2);
  int stable = 0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) stable += reg.at(0, i, j) ? 1 : 0;
  }
  EXPECT_EQ(stable, 1);
  EXPECT_TRUE(reg.at(0, 2, 2));
  EXPECT_EQ(symmetric_difference(reg, 0, 1), 24);
}
