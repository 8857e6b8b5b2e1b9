#pragma once

#include <memory>

#include <Eigen/Dense>

#include "bqcf/operator.hpp"

namespace bqcf::detail {

/// Sparse Cholesky; compute() returns false when the matrix is not numerically
/// positive definite.
class SpdFactor {
 public:
  SpdFactor();
  ~SpdFactor();
  SpdFactor(const SpdFactor&) = delete;
  SpdFactor& operator=(const SpdFactor&) = delete;

  bool compute(const SparseMatrix& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Sparse LU for general square systems.
class LuFactor {
 public:
  LuFactor();
  ~LuFactor();
  LuFactor(const LuFactor&) = delete;
  LuFactor& operator=(const LuFactor&) = delete;

  bool compute(const SparseMatrix& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bqcf::detail
