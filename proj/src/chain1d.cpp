#include "bqcf/chain1d.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace bqcf {

namespace {

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Row-stencil operator: coefficient c[k] couples site i with i+k for k in -2..2.
using RowStencil = std::array<double, 5>;

template <typename StencilFn>
AssembledOperator assemble(const Chain1D& chain, ModelTag tag, StencilFn&& stencil) {
  const int n = chain.num_sites();
  std::vector<int> free_index(static_cast<std::size_t>(n), -1);
  AssembledOperator op;
  for (int i = 0; i < n; ++i) {
    if (chain.is_pinned(i)) continue;
    free_index[static_cast<std::size_t>(i)] = static_cast<int>(op.free_sites.size());
    op.free_sites.push_back(i);
  }
  std::vector<Triplet> triplets;
  triplets.reserve(op.free_sites.size() * 5);
  for (int i : op.free_sites) {
    const RowStencil c = stencil(i);
    const int row = free_index[static_cast<std::size_t>(i)];
    for (int k = -2; k <= 2; ++k) {
      const double v = c[static_cast<std::size_t>(k + 2)];
      if (v == 0.0) continue;
      const int col = free_index[static_cast<std::size_t>(wrap(i + k, n))];
      if (col >= 0) triplets.emplace_back(row, col, v);
    }
  }
  const int m = static_cast<int>(op.free_sites.size());
  op.matrix.resize(m, m);
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.model = tag;
  op.boundary = chain.boundary;
  op.components = 1;
  op.strain = chain.F;
  return op;
}

RowStencil atomistic_stencil(double nn, double nnn, double eps2) {
  return {-nnn / eps2, -nn / eps2, 2.0 * (nn + nnn) / eps2, -nn / eps2, -nnn / eps2};
}

RowStencil local_stencil(double nn, double nnn, double eps2) {
  const double c = nn + 4.0 * nnn;
  return {0.0, -c / eps2, 2.0 * c / eps2, -c / eps2, 0.0};
}

void check_state(const Chain1D& chain, const Eigen::VectorXd& u) {
  if (u.size() != chain.num_sites()) throw std::invalid_argument("displacement size does not match chain");
}

// Bond strains y'_l = F + (u_l - u_{l-1})/eps for every l (periodic).
Eigen::VectorXd bond_strains(const Chain1D& chain, const Eigen::VectorXd& u) {
  const int n = chain.num_sites();
  const double eps = chain.epsilon();
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) {
    s[i] = chain.F + (u[i] - u[wrap(i - 1, n)]) / eps;
    if (!std::isfinite(s[i])) throw std::domain_error("non-finite bond length in chain");
  }
  return s;
}

template <typename FluxFn>
Eigen::VectorXd divergence_force(const Chain1D& chain, FluxFn&& flux) {
  // F_l = (flux_{l+1} - flux_l)/eps where flux_l is the stress carried across bond l.
  const int n = chain.num_sites();
  const double eps = chain.epsilon();
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    f[i] = chain.is_pinned(i) ? 0.0 : (flux(wrap(i + 1, n)) - flux(i)) / eps;
  }
  return f;
}

}  // namespace

Chain1D::Chain1D(int half_period, Boundary bc, double strain) : N(half_period), boundary(bc), F(strain) {
  if (N < 2) throw std::invalid_argument("chain half-period N must be >= 2");
  if (!(F > 0.0)) throw std::invalid_argument("chain strain F must be positive");
}

Eigen::VectorXd diff(const Eigen::VectorXd& u, int order, double epsilon) {
  if (order < 1 || order > 3) throw std::invalid_argument("difference order must be 1..3");
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd d1(n);
  for (int i = 0; i < n; ++i) d1[i] = (u[i] - u[wrap(i - 1, n)]) / epsilon;
  if (order == 1) return d1;
  Eigen::VectorXd d2(n);
  for (int i = 0; i < n; ++i) d2[i] = (d1[wrap(i + 1, n)] - d1[i]) / epsilon;
  if (order == 2) return d2;
  Eigen::VectorXd d3(n);
  for (int i = 0; i < n; ++i) d3[i] = (d2[i] - d2[wrap(i - 1, n)]) / epsilon;
  return d3;
}

Eigen::VectorXd forward_diff(const Eigen::VectorXd& v, double epsilon) {
  const int n = static_cast<int>(v.size());
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = (v[wrap(i + 1, n)] - v[i]) / epsilon;
  return d;
}

Norms1D norms(const Eigen::VectorXd& u, double epsilon) {
  Norms1D out;
  if (u.size() == 0) return out;
  out.l2 = std::sqrt(epsilon * u.squaredNorm());
  out.linf = u.cwiseAbs().maxCoeff();
  out.dl2 = std::sqrt(epsilon * diff(u, 1, epsilon).squaredNorm());
  return out;
}

double inner_eps(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double epsilon) {
  return epsilon * u.dot(v);
}

AssembledOperator assemble_La_1d(const Chain1D& chain, const PairPotential& phi) {
  const double nn = phi.ddphi(chain.F);
  const double nnn = phi.second_neighbors() ? phi.ddphi(2.0 * chain.F) : 0.0;
  const double eps2 = chain.epsilon() * chain.epsilon();
  const RowStencil s = atomistic_stencil(nn, nnn, eps2);
  return assemble(chain, ModelTag::a, [&](int) { return s; });
}

AssembledOperator assemble_Lqcl_1d(const Chain1D& chain, const PairPotential& phi) {
  const double nn = phi.ddphi(chain.F);
  const double nnn = phi.second_neighbors() ? phi.ddphi(2.0 * chain.F) : 0.0;
  const double eps2 = chain.epsilon() * chain.epsilon();
  const RowStencil s = local_stencil(nn, nnn, eps2);
  return assemble(chain, ModelTag::qcl, [&](int) { return s; });
}

AssembledOperator assemble_Lbqcf_1d(const Chain1D& chain, const PairPotential& phi,
                                    const BlendProfile1D& profile) {
  if (profile.size() != chain.num_sites()) {
    throw std::invalid_argument("blend profile and chain have different sizes");
  }
  const double nn = phi.ddphi(chain.F);
  const double nnn = phi.second_neighbors() ? phi.ddphi(2.0 * chain.F) : 0.0;
  const double eps2 = chain.epsilon() * chain.epsilon();
  const RowStencil sa = atomistic_stencil(nn, nnn, eps2);
  const RowStencil sc = local_stencil(nn, nnn, eps2);
  return assemble(chain, ModelTag::bqcf, [&](int i) {
    const double b = profile[i];
    RowStencil s{};
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = b * sa[k] + (1.0 - b) * sc[k];
    return s;
  });
}

Eigen::VectorXd force_a_1d(const Chain1D& chain, const PairPotential& phi, const Eigen::VectorXd& u) {
  check_state(chain, u);
  const int n = chain.num_sites();
  const Eigen::VectorXd s = bond_strains(chain, u);
  const bool nnn = phi.second_neighbors();
  // F_l = (1/eps){[phi'(y'_{l+1}) + phi'(y'_{l+2}+y'_{l+1})] - [phi'(y'_l) + phi'(y'_l+y'_{l-1})]}
  Eigen::VectorXd f(n);
  const double eps = chain.epsilon();
  for (int i = 0; i < n; ++i) {
    if (chain.is_pinned(i)) {
      f[i] = 0.0;
      continue;
    }
    const int ip = wrap(i + 1, n);
    const int ipp = wrap(i + 2, n);
    double right = phi.dphi(s[ip]);
    double left = phi.dphi(s[i]);
    if (nnn) {
      right += phi.dphi(s[ipp] + s[ip]);
      left += phi.dphi(s[i] + s[wrap(i - 1, n)]);
    }
    f[i] = (right - left) / eps;
  }
  return f;
}

Eigen::VectorXd force_qcl_1d(const Chain1D& chain, const PairPotential& phi, const Eigen::VectorXd& u) {
  check_state(chain, u);
  const Eigen::VectorXd s = bond_strains(chain, u);
  const bool nnn = phi.second_neighbors();
  return divergence_force(chain, [&](int i) {
    double v = phi.dphi(s[i]);
    if (nnn) v += 2.0 * phi.dphi(2.0 * s[i]);
    return v;
  });
}

Eigen::VectorXd force_bqcf_1d(const Chain1D& chain, const PairPotential& phi,
                              const BlendProfile1D& profile, const Eigen::VectorXd& u) {
  if (profile.size() != chain.num_sites()) {
    throw std::invalid_argument("blend profile and chain have different sizes");
  }
  const Eigen::VectorXd fa = force_a_1d(chain, phi, u);
  const Eigen::VectorXd fc = force_qcl_1d(chain, phi, u);
  Eigen::VectorXd f(fa.size());
  for (int i = 0; i < f.size(); ++i) f[i] = profile[i] * fa[i] + (1.0 - profile[i]) * fc[i];
  return f;
}

}  // namespace bqcf
