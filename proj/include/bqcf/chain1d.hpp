#pragma once

#include <Eigen/Dense>

#include "bqcf/blending.hpp"
#include "bqcf/operator.hpp"
#include "bqcf/potential.hpp"

namespace bqcf {

/// Second-neighbour chain with 2N sites l = -N+1..N, spacing epsilon = 1/N,
/// stretched homogeneously by F. Site l is stored at index l + N - 1.
/// The Dirichlet variant pins u_{-N+1} = u_N = 0.
struct Chain1D {
  int N = 0;
  Boundary boundary = Boundary::periodic;
  double F = 1.0;

  Chain1D(int half_period, Boundary bc, double strain);

  double epsilon() const noexcept { return 1.0 / N; }
  int num_sites() const noexcept { return 2 * N; }
  int index(int l) const noexcept { return l + N - 1; }
  bool is_pinned(int i) const noexcept {
    return boundary == Boundary::dirichlet && (i == 0 || i == 2 * N - 1);
  }
};

/// Periodic difference quotients: order 1 is (u_l - u_{l-1})/eps, order 2 is
/// (Du_{l+1} - Du_l)/eps, order 3 is (D2u_l - D2u_{l-1})/eps.
Eigen::VectorXd diff(const Eigen::VectorXd& u, int order, double epsilon);
/// (u_{l+1} - u_l)/eps, so that <Du, v> = -<u, forward_diff(v)>.
Eigen::VectorXd forward_diff(const Eigen::VectorXd& v, double epsilon);

struct Norms1D {
  double l2 = 0.0;    ///< (eps sum u^2)^(1/2)
  double linf = 0.0;
  double dl2 = 0.0;   ///< ||Du||_{l2_eps}
};
Norms1D norms(const Eigen::VectorXd& u, double epsilon);
double inner_eps(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double epsilon);

AssembledOperator assemble_La_1d(const Chain1D& chain, const PairPotential& phi);
AssembledOperator assemble_Lqcl_1d(const Chain1D& chain, const PairPotential& phi);
/// diag(beta) L^a + diag(1 - beta) L^qcl. Throws std::invalid_argument when the
/// profile does not live on the chain.
AssembledOperator assemble_Lbqcf_1d(const Chain1D& chain, const PairPotential& phi,
                                    const BlendProfile1D& profile);

/// Nonlinear forces at y = y_F + u for every site (pinned sites report 0).
/// u is indexed like the chain; y'_l = F + (u_l - u_{l-1})/eps.
Eigen::VectorXd force_a_1d(const Chain1D& chain, const PairPotential& phi, const Eigen::VectorXd& u);
Eigen::VectorXd force_qcl_1d(const Chain1D& chain, const PairPotential& phi, const Eigen::VectorXd& u);
Eigen::VectorXd force_bqcf_1d(const Chain1D& chain, const PairPotential& phi,
                              const BlendProfile1D& profile, const Eigen::VectorXd& u);

}  // namespace bqcf
