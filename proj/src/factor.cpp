#include "factor.hpp"

#ifdef BQCF_HAVE_SUITESPARSE
#include <Eigen/CholmodSupport>
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#endif

namespace bqcf::detail {

#ifdef BQCF_HAVE_SUITESPARSE
struct SpdFactor::Impl {
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> solver;
};
struct LuFactor::Impl {
  Eigen::UmfPackLU<SparseMatrix> solver;
};
#else
struct SpdFactor::Impl {
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> solver;
};
struct LuFactor::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> solver;
};
#endif

SpdFactor::SpdFactor() : impl_(std::make_unique<Impl>()) {
#ifdef BQCF_HAVE_SUITESPARSE
  impl_->solver.cholmod().print = 0;
#endif
}
SpdFactor::~SpdFactor() = default;

bool SpdFactor::compute(const SparseMatrix& A) {
  impl_->solver.compute(A);
  return impl_->solver.info() == Eigen::Success;
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& b) const { return impl_->solver.solve(b); }

LuFactor::LuFactor() : impl_(std::make_unique<Impl>()) {}
LuFactor::~LuFactor() = default;

bool LuFactor::compute(const SparseMatrix& A) {
  impl_->solver.compute(A);
  return impl_->solver.info() == Eigen::Success;
}

Eigen::VectorXd LuFactor::solve(const Eigen::VectorXd& b) const { return impl_->solver.solve(b); }

}  // namespace bqcf::detail
