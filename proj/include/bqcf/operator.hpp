#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Sparse>

namespace bqcf {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

enum class Boundary { periodic, dirichlet };

enum class ModelTag { a, qcl, c, bqcf, qcf, ltilde };

std::string_view to_string(ModelTag tag);
std::string_view to_string(Boundary boundary);

/// A linearised (or state) operator restricted to the free degrees of freedom.
///
/// Sign convention: the matrix is the negative force Jacobian, so positive
/// definiteness of its symmetric part means stability. Periodic operators act
/// on the mean-zero subspace (one constraint per displacement component);
/// Dirichlet operators already have the constrained rows and columns removed.
struct AssembledOperator {
  SparseMatrix matrix;
  ModelTag model = ModelTag::a;
  Boundary boundary = Boundary::dirichlet;
  int components = 1;              ///< displacement components per site
  std::vector<int> free_sites;     ///< dof d belongs to free_sites[d / components]
  double strain = 0.0;             ///< loading parameter the operator was built at

  int dim() const noexcept { return static_cast<int>(matrix.rows()); }
  bool mean_zero() const noexcept { return boundary == Boundary::periodic; }
  SparseMatrix symmetric_part() const;
  /// Largest absolute row sum of the symmetric part.
  double norm_inf_sym() const;
};

}  // namespace bqcf
