#pragma once

#include <Eigen/Dense>

namespace bqcf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Morse pair potential phi(r) = [1 - exp(-alpha (r - 1))]^2 with its
/// first and second derivatives in closed form.
///
/// The interaction range is structural: callers enumerate first neighbours
/// only (cutoff 1) or first and second neighbours (cutoff 2, the default).
/// Cutoff 1 is the nearest-neighbour debug mode in which the atomistic,
/// Cauchy-Born and blended models coincide.
class PairPotential {
 public:
  explicit PairPotential(double alpha, int neighbor_cutoff = 2);

  double alpha() const noexcept { return alpha_; }
  int neighbor_cutoff() const noexcept { return cutoff_; }
  bool second_neighbors() const noexcept { return cutoff_ >= 2; }

  // All three throw std::domain_error for r <= 0 or non-finite r.
  double phi(double r) const;
  double dphi(double r) const;
  double ddphi(double r) const;

 private:
  double alpha_;
  int cutoff_;
};

/// phi(r) = phi1(|r|) for a 2-vector bond r.
class VectorPairPotential {
 public:
  explicit VectorPairPotential(PairPotential scalar) : scalar_(scalar) {}

  const PairPotential& scalar() const noexcept { return scalar_; }

  double energy(const Vec2& r) const;
  /// dphi(|r|) r/|r|
  Vec2 grad(const Vec2& r) const;
  /// ddphi(|r|) rhat rhat^T + dphi(|r|)/|r| (I - rhat rhat^T)
  Mat2 hess(const Vec2& r) const;

 private:
  double norm_checked(const Vec2& r) const;
  PairPotential scalar_;
};

}  // namespace bqcf
