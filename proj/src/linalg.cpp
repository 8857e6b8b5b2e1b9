#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bqcf/operator.hpp"
#include "bqcf/stability.hpp"
#include "factor.hpp"

namespace bqcf {

std::string_view to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::a: return "a";
    case ModelTag::qcl: return "qcl";
    case ModelTag::c: return "c";
    case ModelTag::bqcf: return "bqcf";
    case ModelTag::qcf: return "qcf";
    case ModelTag::ltilde: return "ltilde";
  }
  return "?";
}

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::periodic ? "periodic" : "dirichlet";
}

SparseMatrix AssembledOperator::symmetric_part() const {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("operator is not square");
  SparseMatrix t = matrix.transpose();
  SparseMatrix s = 0.5 * (matrix + t);
  s.makeCompressed();
  return s;
}

double AssembledOperator::norm_inf_sym() const {
  const SparseMatrix s = symmetric_part();
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(s.rows());
  for (int k = 0; k < s.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(s, k); it; ++it) rows[it.row()] += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

namespace {

Eigen::VectorXd start_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.5 * std::sin(0.7 * i));
  return v / v.norm();
}

// Orthogonal projector onto fields with zero mean per displacement component.
void project_mean_zero(Eigen::Ref<Eigen::VectorXd> v, int components) {
  const Eigen::Index n = v.size() / components;
  for (int c = 0; c < components; ++c) {
    double mean = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) mean += v[k * components + c];
    mean /= static_cast<double>(n);
    for (Eigen::Index k = 0; k < n; ++k) v[k * components + c] -= mean;
  }
}

Eigen::MatrixXd admissible_dense(const AssembledOperator& op, double norm) {
  Eigen::MatrixXd S = Eigen::MatrixXd(op.symmetric_part());
  if (!op.mean_zero()) return S;
  const Eigen::Index n = S.rows();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 0; j < n; ++j) project_mean_zero(P.col(j), op.components);
  // constants are pushed above the spectrum of S
  const double lift = 2.0 * norm + 1.0;
  return P * S * P + lift * (Eigen::MatrixXd::Identity(n, n) - P);
}

double eig_residual(const SparseMatrix& S, const Eigen::VectorXd& v, double lambda) {
  return (S * v - lambda * v).norm();
}

}  // namespace

EigenPair min_eig_sym_dense(const AssembledOperator& op) {
  if (op.dim() == 0) throw std::invalid_argument("empty operator");
  const double norm = op.norm_inf_sym();
  const Eigen::MatrixXd A = admissible_dense(op, norm);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver did not converge");
  EigenPair out;
  out.value = es.eigenvalues()[0];
  out.vector = es.eigenvectors().col(0);
  out.residual = (A * out.vector - out.value * out.vector).norm();
  return out;
}

EigenPair min_eig_sym_sparse(const AssembledOperator& op, double tol) {
  if (op.mean_zero()) throw std::invalid_argument("sparse eigensolver does not handle mean-zero constraints");
  const int n = op.dim();
  if (n == 0) throw std::invalid_argument("empty operator");
  const SparseMatrix S = op.symmetric_part();
  const double norm = std::max(op.norm_inf_sym(), 1e-300);
  SparseMatrix I(n, n);
  I.setIdentity();
  const SparseMatrix pattern = S + 0.0 * I;

  // S - sigma I is positive definite iff no eigenvalue lies at or below sigma
  detail::SpdFactor factor;
  auto none_below = [&](double sigma) { return factor.compute(pattern - sigma * I); };

  const Eigen::VectorXd v0 = start_vector(n);
  double hi = v0.dot(S * v0) + 1e-12 * norm;
  double lo = -norm * (1.0 + 1e-12) - 1e-300;
  const double width = tol * norm;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (none_below(mid) ? lo : hi) = mid;
  }

  // inverse iteration just below the located eigenvalue
  const double shift = lo - width;
  detail::SpdFactor solver;
  if (!solver.compute(pattern - shift * I)) throw std::runtime_error("inverse iteration factorisation failed");
  Eigen::VectorXd v = v0;
  double lambda = 0.5 * (lo + hi);
  EigenPair out;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd w = solver.solve(v);
    v = w / w.norm();
    lambda = v.dot(S * v);
    out.residual = eig_residual(S, v, lambda);
    if (out.residual <= tol * norm) break;
  }
  out.value = lambda;
  out.vector = v;
  return out;
}

EigenPair min_eig_sym(const AssembledOperator& op, double tol) {
  if (op.mean_zero()) return min_eig_sym_dense(op);
  try {
    EigenPair p = min_eig_sym_sparse(op, tol);
    if (p.residual <= std::sqrt(tol) * op.norm_inf_sym()) return p;
  } catch (const std::runtime_error&) {
    if (op.dim() > kDenseEigenLimit) throw;
  }
  if (op.dim() > kDenseEigenLimit) throw std::runtime_error("sparse eigensolver did not converge");
  return min_eig_sym_dense(op);
}

bool is_positive_definite(const AssembledOperator& op, double rel_threshold) {
  const double norm = op.norm_inf_sym();
  if (!std::isfinite(norm)) return false;
  if (op.mean_zero()) return min_eig_sym_dense(op).value > rel_threshold * norm;
  const int n = op.dim();
  SparseMatrix I(n, n);
  I.setIdentity();
  const SparseMatrix A = op.symmetric_part() - (rel_threshold * norm) * I;
  detail::SpdFactor llt;
  return llt.compute(A);
}

}  // namespace bqcf
