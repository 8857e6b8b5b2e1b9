#include "bqcf/operators2d.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace bqcf {

namespace {

int bond_direction_count(const PairPotential& phi) { return phi.second_neighbors() ? 6 : 3; }

Vec2 node_disp(const Eigen::VectorXd& u, int node) { return Vec2(u[2 * node], u[2 * node + 1]); }

}  // namespace

double primitive_cell_volume() { return 0.5 * std::sqrt(3.0); }

HomogeneousStrain::HomogeneousStrain(const Mat2& B) : B_(B) {
  if (!B.allFinite() || !(B.determinant() > 0.0)) {
    throw std::invalid_argument("deformation gradient must be finite with positive determinant");
  }
}

double CauchyBornDensity::energy(const Mat2& G) const {
  const int count = bond_direction_count(phi_.scalar());
  double w = 0.0;
  for (int d = 0; d < count; ++d) w += phi_.energy(G * direction_vector(d));
  return w / primitive_cell_volume();
}

Mat2 CauchyBornDensity::stress(const Mat2& G) const {
  const int count = bond_direction_count(phi_.scalar());
  Mat2 s = Mat2::Zero();
  for (int d = 0; d < count; ++d) {
    const Vec2 r = direction_vector(d);
    s += phi_.grad(G * r) * r.transpose();
  }
  return s / primitive_cell_volume();
}

double CauchyBornDensity::second_variation(const Mat2& G, const Mat2& H) const {
  const int count = bond_direction_count(phi_.scalar());
  double v = 0.0;
  for (int d = 0; d < count; ++d) {
    const Vec2 r = direction_vector(d);
    const Vec2 hr = H * r;
    v += hr.dot(phi_.hess(G * r) * hr);
  }
  return v / primitive_cell_volume();
}

double ground_state_stretch(const PairPotential& phi) {
  // d/ds W(sI) is proportional to sum_r |r| phi'(s|r|), which is monotone near s = 1.
  auto g = [&](double s) {
    double v = 3.0 * phi.dphi(s);
    if (phi.second_neighbors()) v += 3.0 * std::sqrt(3.0) * phi.dphi(std::sqrt(3.0) * s);
    return v;
  };
  double lo = 0.5, hi = 1.0;
  if (!(g(lo) < 0.0) || g(hi) < 0.0) throw std::runtime_error("ground state stretch not bracketed");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ForceModel2D::ForceModel2D(FEMesh mesh, BondTable bonds, std::vector<double> beta, std::vector<char> vacancy,
                           const PairPotential& phi, const Mat2& B)
    : mesh_(std::move(mesh)),
      bonds_(std::move(bonds)),
      vacancy_(std::move(vacancy)),
      phi_(phi),
      B_(HomogeneousStrain(B).matrix()),
      num_bond_dirs_(bond_direction_count(phi)) {
  const auto n = static_cast<std::size_t>(mesh_.num_nodes());
  if (bonds_.size() != n || vacancy_.size() != n || mesh_.pinned.size() != n || mesh_.geometry.size() != mesh_.triangles.size()) {
    throw std::invalid_argument("force model: inconsistent mesh data");
  }
  free_index_.assign(n, -1);
  for (int k = 0; k < mesh_.num_nodes(); ++k) {
    if (mesh_.pinned[static_cast<std::size_t>(k)] || vacancy_[static_cast<std::size_t>(k)]) continue;
    free_index_[static_cast<std::size_t>(k)] = static_cast<int>(free_nodes_.size());
    free_nodes_.push_back(k);
  }
  element_active_.assign(mesh_.triangles.size(), 1);
  for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
    for (int v : mesh_.triangles[t]) {
      if (vacancy_[static_cast<std::size_t>(v)]) element_active_[t] = 0;
    }
  }
  set_beta(std::move(beta));
}

void ForceModel2D::set_beta(std::vector<double> beta) {
  if (beta.size() != static_cast<std::size_t>(mesh_.num_nodes())) {
    throw std::invalid_argument("force model: blend weight count does not match node count");
  }
  for (int k = 0; k < mesh_.num_nodes(); ++k) {
    const double b = beta[static_cast<std::size_t>(k)];
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("blend weights must lie in [0, 1]");
    if (b > 0.0 && !mesh_.fine[static_cast<std::size_t>(k)]) {
      throw std::invalid_argument("atomistic weight on a coarse node " + std::to_string(k));
    }
  }
  beta_ = std::move(beta);
}

Eigen::VectorXd ForceModel2D::restrict_to_free(const Eigen::VectorXd& nodal) const {
  if (nodal.size() != 2 * num_nodes()) throw std::invalid_argument("nodal field size mismatch");
  Eigen::VectorXd out(num_free_dofs());
  for (std::size_t f = 0; f < free_nodes_.size(); ++f) {
    const int k = free_nodes_[f];
    out[static_cast<Eigen::Index>(2 * f)] = nodal[2 * k];
    out[static_cast<Eigen::Index>(2 * f + 1)] = nodal[2 * k + 1];
  }
  return out;
}

Eigen::VectorXd ForceModel2D::expand(const Eigen::VectorXd& free) const {
  if (free.size() != num_free_dofs()) throw std::invalid_argument("free vector size mismatch");
  Eigen::VectorXd out = zero_state();
  for (std::size_t f = 0; f < free_nodes_.size(); ++f) {
    const int k = free_nodes_[f];
    out[2 * k] = free[static_cast<Eigen::Index>(2 * f)];
    out[2 * k + 1] = free[static_cast<Eigen::Index>(2 * f + 1)];
  }
  return out;
}

Vec2 ForceModel2D::bond_vector(int node, int d, int nb, const Eigen::VectorXd& u) const {
  Vec2 r = B_ * direction_vector(d) - node_disp(u, node);
  if (nb >= 0) r += node_disp(u, nb);
  return r;
}

Mat2 ForceModel2D::element_gradient(int t, const Eigen::VectorXd& u) const {
  const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
  const auto& geo = mesh_.geometry[static_cast<std::size_t>(t)];
  Mat2 G = B_;
  for (int k = 0; k < 3; ++k) G += node_disp(u, tri[static_cast<std::size_t>(k)]) * geo.grad[static_cast<std::size_t>(k)].transpose();
  return G;
}

double ForceModel2D::atomistic_energy(const Eigen::VectorXd& u) const {
  double e = 0.0;
  for (int k = 0; k < num_nodes(); ++k) {
    if (vacancy_[static_cast<std::size_t>(k)]) continue;
    const auto& row = bonds_[static_cast<std::size_t>(k)];
    for (int d = 0; d < kNumDirections; ++d) {
      if (d % 6 >= num_bond_dirs_) continue;
      const int nb = row[static_cast<std::size_t>(d)];
      if (nb == -1) continue;
      e += 0.5 * phi_.energy(bond_vector(k, d, nb, u));
    }
  }
  return e;
}

double ForceModel2D::continuum_energy(const Eigen::VectorXd& u) const {
  if (u.size() != 2 * num_nodes()) throw std::invalid_argument("state size mismatch");
  const CauchyBornDensity W(phi_.scalar());
  double e = 0.0;
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    if (!element_active_[static_cast<std::size_t>(t)]) continue;
    e += mesh_.geometry[static_cast<std::size_t>(t)].area * W.energy(element_gradient(t, u));
  }
  return e;
}

void ForceModel2D::atomistic_forces_into(const Eigen::VectorXd& u, Eigen::VectorXd& f,
                                         const std::vector<double>* weight) const {
  for (int k : free_nodes_) {
    const double w = weight ? (*weight)[static_cast<std::size_t>(k)] : 1.0;
    if (w == 0.0) continue;
    const auto& row = bonds_[static_cast<std::size_t>(k)];
    Vec2 acc = Vec2::Zero();
    for (int d = 0; d < num_bond_dirs_; ++d) {
      // opposite bonds are paired first so that the homogeneous state is exactly force-free
      Vec2 pair = Vec2::Zero();
      const int n1 = row[static_cast<std::size_t>(d)];
      const int n2 = row[static_cast<std::size_t>(d + 6)];
      if (n1 != -1) pair += phi_.grad(bond_vector(k, d, n1, u));
      if (n2 != -1) pair += phi_.grad(bond_vector(k, d + 6, n2, u));
      acc += pair;
    }
    f[2 * k] += w * acc.x();
    f[2 * k + 1] += w * acc.y();
  }
}

void ForceModel2D::continuum_forces_into(const Eigen::VectorXd& u, Eigen::VectorXd& f,
                                         const std::vector<double>* weight) const {
  const double inv_vol = 1.0 / primitive_cell_volume();
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    if (!element_active_[static_cast<std::size_t>(t)]) continue;
    const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
    const auto& geo = mesh_.geometry[static_cast<std::size_t>(t)];
    bool any = false;
    for (int v : tri) {
      if (free_index_[static_cast<std::size_t>(v)] >= 0 && (!weight || (*weight)[static_cast<std::size_t>(v)] < 1.0)) any = true;
    }
    if (!any) continue;
    const Mat2 G = element_gradient(t, u);
    // stress P = dW/dG; the force on vertex k is -area P grad(psi_k)
    Mat2 P = Mat2::Zero();
    for (int d = 0; d < num_bond_dirs_; ++d) {
      const Vec2 r = direction_vector(d);
      P += phi_.grad(G * r) * r.transpose();
    }
    P *= geo.area * inv_vol;
    for (int k = 0; k < 3; ++k) {
      const int v = tri[static_cast<std::size_t>(k)];
      if (free_index_[static_cast<std::size_t>(v)] < 0) continue;
      const double w = weight ? 1.0 - (*weight)[static_cast<std::size_t>(v)] : 1.0;
      if (w == 0.0) continue;
      const Vec2 fk = -(P * geo.grad[static_cast<std::size_t>(k)]);
      f[2 * v] += w * fk.x();
      f[2 * v + 1] += w * fk.y();
    }
  }
}

Eigen::VectorXd ForceModel2D::atomistic_forces(const Eigen::VectorXd& u) const {
  if (u.size() != 2 * num_nodes()) throw std::invalid_argument("state size mismatch");
  Eigen::VectorXd f = zero_state();
  atomistic_forces_into(u, f, nullptr);
  return f;
}

Eigen::VectorXd ForceModel2D::continuum_forces(const Eigen::VectorXd& u) const {
  if (u.size() != 2 * num_nodes()) throw std::invalid_argument("state size mismatch");
  Eigen::VectorXd f = zero_state();
  continuum_forces_into(u, f, nullptr);
  return f;
}

Eigen::VectorXd ForceModel2D::forces(const Eigen::VectorXd& u) const {
  if (u.size() != 2 * num_nodes()) throw std::invalid_argument("state size mismatch");
  Eigen::VectorXd f = zero_state();
  atomistic_forces_into(u, f, &beta_);
  continuum_forces_into(u, f, &beta_);
  return f;
}

SparseMatrix ForceModel2D::jacobian(const Eigen::VectorXd& u) const { return jacobian_weighted(u, beta_); }

SparseMatrix ForceModel2D::jacobian_weighted(const Eigen::VectorXd& u, const std::vector<double>& beta) const {
  if (u.size() != 2 * num_nodes()) throw std::invalid_argument("state size mismatch");
  if (beta.size() != static_cast<std::size_t>(num_nodes())) throw std::invalid_argument("weight size mismatch");
  std::vector<Triplet> trips;
  auto add_block = [&](int row_node, int col_node, const Mat2& m) {
    const int r = free_index_[static_cast<std::size_t>(row_node)];
    const int c = free_index_[static_cast<std::size_t>(col_node)];
    if (r < 0 || c < 0) return;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (m(a, b) != 0.0) trips.emplace_back(2 * r + a, 2 * c + b, m(a, b));
      }
    }
  };

  for (int k : free_nodes_) {
    const double w = beta[static_cast<std::size_t>(k)];
    if (w == 0.0) continue;
    const auto& row = bonds_[static_cast<std::size_t>(k)];
    Mat2 diag = Mat2::Zero();
    for (int d = 0; d < kNumDirections; ++d) {
      if (d % 6 >= num_bond_dirs_) continue;
      const int nb = row[static_cast<std::size_t>(d)];
      if (nb == -1) continue;
      const Mat2 H = w * phi_.hess(bond_vector(k, d, nb, u));
      diag += H;
      if (nb >= 0) add_block(k, nb, -H);
    }
    add_block(k, k, diag);
  }

  const double inv_vol = 1.0 / primitive_cell_volume();
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    if (!element_active_[static_cast<std::size_t>(t)]) continue;
    const auto& tri = mesh_.triangles[static_cast<std::size_t>(t)];
    const auto& geo = mesh_.geometry[static_cast<std::size_t>(t)];
    bool any = false;
    for (int v : tri) {
      if (free_index_[static_cast<std::size_t>(v)] >= 0 && beta[static_cast<std::size_t>(v)] < 1.0) any = true;
    }
    if (!any) continue;
    const Mat2 G = element_gradient(t, u);
    std::array<Mat2, 6> H;
    std::array<Vec2, 6> r;
    for (int d = 0; d < num_bond_dirs_; ++d) {
      r[static_cast<std::size_t>(d)] = direction_vector(d);
      H[static_cast<std::size_t>(d)] = phi_.hess(G * r[static_cast<std::size_t>(d)]);
    }
    for (int k = 0; k < 3; ++k) {
      const int vk = tri[static_cast<std::size_t>(k)];
      if (free_index_[static_cast<std::size_t>(vk)] < 0) continue;
      const double w = 1.0 - beta[static_cast<std::size_t>(vk)];
      if (w == 0.0) continue;
      for (int m = 0; m < 3; ++m) {
        Mat2 block = Mat2::Zero();
        for (int d = 0; d < num_bond_dirs_; ++d) {
          const auto sd = static_cast<std::size_t>(d);
          const double ck = geo.grad[static_cast<std::size_t>(k)].dot(r[sd]);
          const double cm = geo.grad[static_cast<std::size_t>(m)].dot(r[sd]);
          block += (ck * cm) * H[sd];
        }
        add_block(vk, tri[static_cast<std::size_t>(m)], (w * geo.area * inv_vol) * block);
      }
    }
  }

  SparseMatrix J(num_free_dofs(), num_free_dofs());
  J.setFromTriplets(trips.begin(), trips.end());
  J.makeCompressed();
  return J;
}

std::vector<double> blend_weights(const TriangularLattice& lattice, const Blend2D& blend) {
  std::vector<double> w(static_cast<std::size_t>(lattice.num_sites()));
  for (int id = 0; id < lattice.num_sites(); ++id) {
    const auto& c = lattice.coord(id);
    w[static_cast<std::size_t>(id)] = blend.at_site(c.i, c.j, lattice.position(id));
  }
  return w;
}

ForceModel2D make_lattice_model(const TriangularLattice& lattice, const VacancySet& vacancies,
                                const PairPotential& phi, const Blend2D& blend, const Mat2& B) {
  const int n = lattice.num_sites();
  ForceModel2D::BondTable bonds(static_cast<std::size_t>(n));
  std::vector<char> vac(static_cast<std::size_t>(n), 0);
  for (int id = 0; id < n; ++id) {
    vac[static_cast<std::size_t>(id)] = vacancies.contains(id) ? 1 : 0;
    for (int d = 0; d < kNumDirections; ++d) {
      const int nb = lattice.neighbor(id, d);
      bonds[static_cast<std::size_t>(id)][static_cast<std::size_t>(d)] = vacancies.contains(nb) ? -1 : nb;
    }
  }
  return ForceModel2D(canonical_triangulation(lattice), std::move(bonds), blend_weights(lattice, blend),
                      std::move(vac), phi, B);
}

AssembledOperator wrap_operator(const ForceModel2D& model, const TriangularLattice& lattice, SparseMatrix matrix,
                                ModelTag tag, double strain) {
  AssembledOperator op;
  op.matrix = std::move(matrix);
  op.model = tag;
  op.boundary = lattice.boundary();
  op.components = 2;
  op.free_sites = model.free_nodes();
  op.strain = strain;
  return op;
}

AssembledOperator assemble_La_2d(const TriangularLattice& lattice, const VacancySet& vacancies, const Mat2& B,
                                 const PairPotential& phi) {
  const auto model = make_lattice_model(lattice, vacancies, phi, Blend2D::constant(1.0), B);
  return wrap_operator(model, lattice, model.jacobian(model.zero_state()), ModelTag::a);
}

AssembledOperator assemble_Lc_2d(const TriangularLattice& lattice, const Mat2& B, const PairPotential& phi) {
  const auto model = make_lattice_model(lattice, VacancySet(), phi, Blend2D::constant(0.0), B);
  return wrap_operator(model, lattice, model.jacobian(model.zero_state()), ModelTag::c);
}

AssembledOperator assemble_Lbqcf_2d(const TriangularLattice& lattice, const Mat2& B, const PairPotential& phi,
                                    const Blend2D& blend, const VacancySet& vacancies) {
  const auto model = make_lattice_model(lattice, vacancies, phi, blend, B);
  const ModelTag tag = blend.shape() == Blend2D::Shape::indicator ? ModelTag::qcf : ModelTag::bqcf;
  return wrap_operator(model, lattice, model.jacobian(model.zero_state()), tag);
}

AssembledOperator assemble_Ltilde_2d(const TriangularLattice& lattice, const Mat2& B, const PairPotential& phi,
                                     const Blend2D& blend) {
  const auto model = make_lattice_model(lattice, VacancySet(), phi, Blend2D::constant(0.0), B);
  SparseMatrix L = model.jacobian(model.zero_state());
  const VectorPairPotential vphi(phi);
  // a1, a2, a3, a4 = -a1 and b_i = a_i + a_{i+1}
  const std::array<int, 4> a_dir = {0, 1, 2, 6};
  const std::array<int, 3> b_dir = {3, 4, 5};
  std::vector<Triplet> trips;
  for (int i = 0; i < 3; ++i) {
    if (!phi.second_neighbors()) break;
    Eigen::SelfAdjointEigenSolver<Mat2> es(vphi.hess(B * direction_vector(b_dir[static_cast<std::size_t>(i)])));
    const Mat2 M = es.eigenvectors() * es.eigenvalues().cwiseAbs().asDiagonal() * es.eigenvectors().transpose();
    const auto& da = kDirections[static_cast<std::size_t>(a_dir[static_cast<std::size_t>(i)])];
    const auto& db = kDirections[static_cast<std::size_t>(a_dir[static_cast<std::size_t>(i + 1)])];
    for (int id = 0; id < lattice.num_sites(); ++id) {
      const auto& c = lattice.coord(id);
      const int si = c.i, sj = c.j - 1;  // x - a2
      const double w = blend.at_site(si, sj, lattice_position(si, sj));
      if (w == 0.0) continue;
      const int zi = c.i - 1, zj = c.j - 1;  // x - a1 - a2
      const std::array<std::pair<int, double>, 4> stencil = {{
          {lattice.find(zi + da.i + db.i, zj + da.j + db.j).value_or(-1), 1.0},
          {lattice.find(zi + da.i, zj + da.j).value_or(-1), -1.0},
          {lattice.find(zi + db.i, zj + db.j).value_or(-1), -1.0},
          {lattice.find(zi, zj).value_or(-1), 1.0},
      }};
      for (const auto& [p, cp] : stencil) {
        if (p < 0 || model.free_index(p) < 0) continue;
        for (const auto& [q, cq] : stencil) {
          if (q < 0 || model.free_index(q) < 0) continue;
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              trips.emplace_back(2 * model.free_index(p) + a, 2 * model.free_index(q) + b, -w * cp * cq * M(a, b));
            }
          }
        }
      }
    }
  }
  SparseMatrix corr(L.rows(), L.cols());
  corr.setFromTriplets(trips.begin(), trips.end());
  L += corr;
  L.makeCompressed();
  return wrap_operator(model, lattice, std::move(L), ModelTag::ltilde);
}

Eigen::VectorXd force_a_2d(const TriangularLattice& lattice, const VacancySet& vacancies, const PairPotential& phi,
                           const Mat2& B, const Eigen::VectorXd& u) {
  return make_lattice_model(lattice, vacancies, phi, Blend2D::constant(1.0), B).atomistic_forces(u);
}

Eigen::VectorXd force_c_2d(const TriangularLattice& lattice, const VacancySet& vacancies, const PairPotential& phi,
                           const Mat2& B, const Eigen::VectorXd& u) {
  return make_lattice_model(lattice, vacancies, phi, Blend2D::constant(0.0), B).continuum_forces(u);
}

Eigen::VectorXd force_bqcf_2d(const TriangularLattice& lattice, const VacancySet& vacancies,
                              const PairPotential& phi, const Blend2D& blend, const Mat2& B,
                              const Eigen::VectorXd& u) {
  return make_lattice_model(lattice, vacancies, phi, blend, B).forces(u);
}

AssembledOperator hessian_bqcf_2d(const TriangularLattice& lattice, const VacancySet& vacancies,
                                  const PairPotential& phi, const Blend2D& blend, const Mat2& B,
                                  const Eigen::VectorXd& u) {
  const auto model = make_lattice_model(lattice, vacancies, phi, blend, B);
  const ModelTag tag = blend.shape() == Blend2D::Shape::indicator ? ModelTag::qcf : ModelTag::bqcf;
  return wrap_operator(model, lattice, model.jacobian(u), tag);
}

}  // namespace bqcf
