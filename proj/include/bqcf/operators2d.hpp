#pragma once

#include <array>
#include <vector>

#include "bqcf/blending.hpp"
#include "bqcf/lattice2d.hpp"
#include "bqcf/mesh.hpp"
#include "bqcf/operator.hpp"
#include "bqcf/potential.hpp"

namespace bqcf {

/// Volume of the primitive cell of the unit triangular lattice, sqrt(3)/2.
double primitive_cell_volume();

/// Homogeneous deformation gradient with positive determinant.
class HomogeneousStrain {
 public:
  explicit HomogeneousStrain(const Mat2& B);
  const Mat2& matrix() const noexcept { return B_; }

 private:
  Mat2 B_;
};

/// Cauchy-Born energy density W(G) = (1/Omega0) sum_{r in {a_i, b_i}} phi(G r).
class CauchyBornDensity {
 public:
  explicit CauchyBornDensity(PairPotential phi) : phi_(phi) {}

  double energy(const Mat2& G) const;
  /// dW/dG
  Mat2 stress(const Mat2& G) const;
  /// d^2W(G)[H, H]
  double second_variation(const Mat2& G, const Mat2& H) const;

 private:
  VectorPairPotential phi_;
};

/// Stretch s0 with W(s0 I) minimal among isotropic states; B0 = s0 I minimises W.
double ground_state_stretch(const PairPotential& phi);

/// Sentinel neighbour id: the atom exists but lies outside the mesh and follows y = Bx.
inline constexpr int kGhostNeighbor = -2;

/// Blended force field on a P1 mesh with atomistic bonds attached to fine nodes.
///
/// The state is the displacement u = y - Bx at every node (two components,
/// interleaved). Forces are F = beta F^a + (1 - beta) F^c with beta the
/// atomistic weight per node; F^a sums pair forces over the 12 (or 6) bonds of a
/// node and F^c = -dE^c/du with E^c = sum_T vol(T) W(grad y|_T). Triangles that
/// touch a vacancy are left out of E^c.
class ForceModel2D {
 public:
  using BondTable = std::vector<std::array<int, kNumDirections>>;

  ForceModel2D(FEMesh mesh, BondTable bonds, std::vector<double> beta, std::vector<char> vacancy,
               const PairPotential& phi, const Mat2& B);

  const FEMesh& mesh() const noexcept { return mesh_; }
  const Mat2& B() const noexcept { return B_; }
  void set_B(const Mat2& B) { B_ = HomogeneousStrain(B).matrix(); }
  const PairPotential& potential() const noexcept { return phi_.scalar(); }
  const std::vector<double>& beta() const noexcept { return beta_; }
  void set_beta(std::vector<double> beta);

  int num_nodes() const noexcept { return mesh_.num_nodes(); }
  int num_free_dofs() const noexcept { return 2 * static_cast<int>(free_nodes_.size()); }
  const std::vector<int>& free_nodes() const noexcept { return free_nodes_; }
  int free_index(int node) const { return free_index_[static_cast<std::size_t>(node)]; }
  bool is_vacancy(int node) const { return vacancy_[static_cast<std::size_t>(node)] != 0; }

  Eigen::VectorXd zero_state() const { return Eigen::VectorXd::Zero(2 * num_nodes()); }
  Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& nodal) const;
  /// Free-dof vector to nodal field (constrained nodes get zero displacement).
  Eigen::VectorXd expand(const Eigen::VectorXd& free) const;

  double atomistic_energy(const Eigen::VectorXd& u) const;
  double continuum_energy(const Eigen::VectorXd& u) const;

  /// Per-node forces (zero at constrained nodes).
  Eigen::VectorXd atomistic_forces(const Eigen::VectorXd& u) const;
  Eigen::VectorXd continuum_forces(const Eigen::VectorXd& u) const;
  Eigen::VectorXd forces(const Eigen::VectorXd& u) const;
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const { return restrict_to_free(forces(u)); }

  /// Row-blended negative force Jacobian on the free dofs.
  SparseMatrix jacobian(const Eigen::VectorXd& u) const;
  /// Same, with explicit per-node weights of the atomistic rows (used for pure models).
  SparseMatrix jacobian_weighted(const Eigen::VectorXd& u, const std::vector<double>& beta) const;

 private:
  Vec2 bond_vector(int node, int d, int nb, const Eigen::VectorXd& u) const;
  void atomistic_forces_into(const Eigen::VectorXd& u, Eigen::VectorXd& f, const std::vector<double>* weight) const;
  void continuum_forces_into(const Eigen::VectorXd& u, Eigen::VectorXd& f, const std::vector<double>* weight) const;
  Mat2 element_gradient(int t, const Eigen::VectorXd& u) const;

  FEMesh mesh_;
  BondTable bonds_;
  std::vector<double> beta_;
  std::vector<char> vacancy_;
  std::vector<char> element_active_;
  std::vector<int> free_nodes_;
  std::vector<int> free_index_;
  VectorPairPotential phi_;
  Mat2 B_;
  int num_bond_dirs_ = 6;  // 3 with nearest-neighbour cutoff
};

/// Per-site atomistic weights of a blend on a lattice.
std::vector<double> blend_weights(const TriangularLattice& lattice, const Blend2D& blend);

/// Full-resolution model on a lattice cell (every atom is a mesh node).
ForceModel2D make_lattice_model(const TriangularLattice& lattice, const VacancySet& vacancies,
                                const PairPotential& phi, const Blend2D& blend, const Mat2& B);

/// Operator wrapper around a Jacobian of a lattice model.
AssembledOperator wrap_operator(const ForceModel2D& model, const TriangularLattice& lattice, SparseMatrix matrix,
                                ModelTag tag, double strain = 0.0);

AssembledOperator assemble_La_2d(const TriangularLattice& lattice, const VacancySet& vacancies, const Mat2& B,
                                 const PairPotential& phi);
AssembledOperator assemble_Lc_2d(const TriangularLattice& lattice, const Mat2& B, const PairPotential& phi);
/// Tagged qcf when the blend is a sharp indicator.
AssembledOperator assemble_Lbqcf_2d(const TriangularLattice& lattice, const Mat2& B, const PairPotential& phi,
                                    const Blend2D& blend, const VacancySet& vacancies = {});
/// Verification-only operator <L~u,u> = <L^c u,u> - sum_i sum_x beta(x - a2) |D_{a_i}D_{a_{i+1}} u(x-a1-a2)|^2_{b_i}
/// with |w|^2_{b_i} = w . |phi''(B b_i)| w (spectral absolute value), in unscaled units.
AssembledOperator assemble_Ltilde_2d(const TriangularLattice& lattice, const Mat2& B, const PairPotential& phi,
                                     const Blend2D& blend);

Eigen::VectorXd force_a_2d(const TriangularLattice& lattice, const VacancySet& vacancies, const PairPotential& phi,
                           const Mat2& B, const Eigen::VectorXd& u);
Eigen::VectorXd force_c_2d(const TriangularLattice& lattice, const VacancySet& vacancies, const PairPotential& phi,
                           const Mat2& B, const Eigen::VectorXd& u);
Eigen::VectorXd force_bqcf_2d(const TriangularLattice& lattice, const VacancySet& vacancies,
                              const PairPotential& phi, const Blend2D& blend, const Mat2& B,
                              const Eigen::VectorXd& u);
AssembledOperator hessian_bqcf_2d(const TriangularLattice& lattice, const VacancySet& vacancies,
                                  const PairPotential& phi, const Blend2D& blend, const Mat2& B,
                                  const Eigen::VectorXd& u);

}  // namespace bqcf
