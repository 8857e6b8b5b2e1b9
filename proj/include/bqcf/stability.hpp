#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bqcf/operator.hpp"
#include "bqcf/operators2d.hpp"

namespace bqcf {

/// Smallest eigenpair of the symmetric part of an operator on its admissible
/// subspace. `residual` is ||S v - lambda v||_2 with ||v||_2 = 1.
struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

/// Dimension up to which min_eig_sym uses a dense symmetric eigensolver.
inline constexpr int kDenseEigenLimit = 4096;

/// Periodic operators use the dense solver on the mean-zero subspace. Dirichlet
/// operators use bisection on shifted LDL^T inertia followed by inverse
/// iteration, locating the eigenvalue to tol * ||S||; if the sparse eigenpair
/// residual exceeds sqrt(tol) * ||S|| and dim <= kDenseEigenLimit the dense
/// solver is used instead, otherwise std::runtime_error is thrown.
EigenPair min_eig_sym(const AssembledOperator& op, double tol = 1e-10);
/// Always dense (reference path for the sparse solver).
EigenPair min_eig_sym_dense(const AssembledOperator& op);
/// Always sparse; throws std::invalid_argument for periodic operators.
EigenPair min_eig_sym_sparse(const AssembledOperator& op, double tol = 1e-10);

/// Stable iff the symmetric part exceeds threshold * ||S||_inf on the admissible
/// subspace. Dirichlet operators are decided by a sparse Cholesky factorisation
/// of S - threshold * ||S|| I; periodic ones by the dense eigenvalue.
bool is_positive_definite(const AssembledOperator& op, double rel_threshold = 0.0);

/// Index-ordered parallel loop; results written by index are schedule independent.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

enum class Divergence { none, residual_blowup, indefinite, max_iter };
std::string_view to_string(Divergence reason);

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;            ///< final scaled l-infinity residual
  bool positive_definite = false;   ///< state operator at the final iterate
  Divergence reason = Divergence::none;
  std::vector<double> history;      ///< scaled residual before every step
};

struct NewtonOptions {
  double tol = 1e-5;
  double residual_scale = 1.0;      ///< multiplies ||F||_inf before comparisons
  double blowup = 100.0;            ///< abort when the scaled residual reaches this
  bool guard_definiteness = true;   ///< abort when the state operator is indefinite
  bool check_final_definiteness = true;
  int max_iter = 50;
  int max_halvings = 0;             ///< > 0 enables backtracking on ||F||_2
};

/// Newton's method for F(x) = 0 with J = -dF/dx supplied by `jacobian`.
/// Definiteness of the symmetric part of J is tested with is_positive_definite
/// on a Dirichlet-type operator.
NewtonReport newton_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& force,
                          const std::function<SparseMatrix(const Eigen::VectorXd&)>& jacobian, Eigen::VectorXd& x,
                          const NewtonOptions& options = {});

struct CriticalStrainResult {
  ModelTag model = ModelTag::a;
  double gamma = 0.0;               ///< last stable strain
  double first_unstable = 0.0;
  double resolution = 0.0;
  std::vector<std::pair<double, bool>> history;  ///< every (gamma, stable) evaluation
  bool verified = false;            ///< forward scan beyond the bracket found only unstable points
};

using OperatorFamily = std::function<AssembledOperator(double gamma)>;

/// Marches from gamma_start in steps of `step` until the first unstable point
/// (at most gamma_max), then bisects the bracket to width <= dgamma and scans 8
/// points at spacing dgamma beyond it. Throws std::runtime_error when
/// gamma_start is unstable or no instability is found up to gamma_max.
CriticalStrainResult critical_strain_linear(const OperatorFamily& family, double gamma_start, double step,
                                            double gamma_max, double dgamma, double rel_threshold = 0.0);

/// Per-cell stability of several models on a rectangular (s, r) grid with
/// B = [[1 + s, shear], [0, 1 + r]].
struct StabilityRegion {
  std::vector<double> s;
  std::vector<double> r;
  double shear = 0.1;
  std::vector<std::string> models;
  /// stable[m][i * r.size() + j] for (s[i], r[j])
  std::vector<std::vector<char>> stable;

  bool at(int model, int i, int j) const {
    return stable[static_cast<std::size_t>(model)][static_cast<std::size_t>(i) * r.size() + static_cast<std::size_t>(j)] != 0;
  }
};

using StrainOperatorFamily = std::function<AssembledOperator(const Mat2& B)>;

StabilityRegion stability_region(const std::vector<std::pair<std::string, StrainOperatorFamily>>& models,
                                 const std::vector<double>& s_grid, const std::vector<double>& r_grid,
                                 double shear = 0.1, int threads = 1);

/// Nonlinear loading path: B(gamma) applied to a force model with defects.
struct NonlinearCase {
  std::function<Mat2(double)> B;
};

struct NonlinearCriticalResult {
  CriticalStrainResult strain;
  Eigen::VectorXd state;            ///< equilibrium displacement at the last stable strain
  int newton_solves = 0;
};

/// Continuation in gamma from gamma_start with step `step`, each Newton run
/// starting from the previous equilibrium displacement, followed by bisection to
/// dgamma. A strain is stable when Newton converges under both guards and the
/// state operator at the equilibrium is positive definite.
NonlinearCriticalResult critical_strain_nonlinear(ForceModel2D& model, const NonlinearCase& loading,
                                                  double gamma_start, double step, double gamma_max,
                                                  double dgamma, const NewtonOptions& options = {});

/// Eigenvector of the smallest eigenvalue of the symmetric part, scaled to unit
/// l-infinity norm with its largest-magnitude entry positive.
Eigen::VectorXd critical_eigenmode(const AssembledOperator& op);

}  // namespace bqcf
