#include "bqcf/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bqcf {

namespace {

void check_length(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("pair potential evaluated at non-positive bond length " +
                            std::to_string(r));
  }
}

}  // namespace

PairPotential::PairPotential(double alpha, int neighbor_cutoff)
    : alpha_(alpha), cutoff_(neighbor_cutoff) {
  if (!(alpha > 0.0)) throw std::invalid_argument("Morse stiffness must be positive");
  if (neighbor_cutoff != 1 && neighbor_cutoff != 2) {
    throw std::invalid_argument("neighbor cutoff must be 1 or 2");
  }
}

double PairPotential::phi(double r) const {
  check_length(r);
  const double s = 1.0 - std::exp(-alpha_ * (r - 1.0));
  return s * s;
}

double PairPotential::dphi(double r) const {
  check_length(r);
  const double e = std::exp(-alpha_ * (r - 1.0));
  return 2.0 * alpha_ * e * (1.0 - e);
}

double PairPotential::ddphi(double r) const {
  check_length(r);
  const double e = std::exp(-alpha_ * (r - 1.0));
  return 2.0 * alpha_ * alpha_ * e * (2.0 * e - 1.0);
}

double VectorPairPotential::norm_checked(const Vec2& r) const {
  const double n = r.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::domain_error("zero-length bond");
  return n;
}

double VectorPairPotential::energy(const Vec2& r) const { return scalar_.phi(norm_checked(r)); }

Vec2 VectorPairPotential::grad(const Vec2& r) const {
  const double n = norm_checked(r);
  return scalar_.dphi(n) / n * r;
}

Mat2 VectorPairPotential::hess(const Vec2& r) const {
  const double n = norm_checked(r);
  const Vec2 rhat = r / n;
  const Mat2 radial = rhat * rhat.transpose();
  Mat2 h = scalar_.ddphi(n) * radial + scalar_.dphi(n) / n * (Mat2::Identity() - radial);
  // exact symmetry
  h(0, 1) = h(1, 0) = 0.5 * (h(0, 1) + h(1, 0));
  return h;
}

}  // namespace bqcf
