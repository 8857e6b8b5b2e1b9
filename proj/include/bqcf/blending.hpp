#pragma once

#include <string_view>
#include <vector>

#include "bqcf/potential.hpp"

namespace bqcf {

enum class SplineKind { cubic, quintic };

SplineKind parse_spline_kind(std::string_view name);
std::string_view to_string(SplineKind kind);

/// Clamped blending spline: 0 for x < 0, 1 for x > 1 and
/// -2x^3 + 3x^2 (cubic) or 6x^5 - 15x^4 + 10x^3 (quintic) in between.
double spline_eval(SplineKind kind, double x);

/// Exact derivative of order 1..3 of the clamped spline (one-sided at the knots
/// is not needed; the polynomial branch is used on [0, 1]).
double spline_derivative(SplineKind kind, double x, int order);

/// Atomistic weights beta_l on the 1D chain, l = -N+1..N.
class BlendProfile1D {
 public:
  /// beta_l = B(l / K): continuum for l <= 0, blend for 1..K-1, atomistic for l >= K.
  static BlendProfile1D from_spline(SplineKind kind, int K, int N);
  static BlendProfile1D constant(double value, int N);
  static BlendProfile1D from_values(std::vector<double> values);

  int half_period() const noexcept { return static_cast<int>(values_.size()) / 2; }
  int size() const noexcept { return static_cast<int>(values_.size()); }
  /// Nominal width the profile was built with (0 for custom profiles).
  int nominal_width() const noexcept { return nominal_k_; }

  /// Indexed by storage position i = l + N - 1.
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double at_site(int l) const { return values_[static_cast<std::size_t>(l + half_period() - 1)]; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Sites l with 0 < beta_{l+j} < 1 for some j in {0, +-1, +-2}.
  std::vector<int> support_set() const;
  int support_width() const { return static_cast<int>(support_set().size()); }

 private:
  BlendProfile1D(std::vector<double> values, int nominal_k)
      : values_(std::move(values)), nominal_k_(nominal_k) {}
  std::vector<double> values_;
  int nominal_k_ = 0;
};

struct DerivativeSupNorms {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Sup norms of D beta, D^(2) beta, D^(3) beta with the chain stencils and
/// lattice spacing epsilon. The profile is not wrapped: only stencils whose
/// sites all lie in -N+1..N contribute.
DerivativeSupNorms derivative_sup_norms(const BlendProfile1D& profile, double epsilon);

/// Continuous hexagon norm max(|i|, |j|, |i + j|) of x = i a1 + j a2.
double hex_radius(const Vec2& x);

/// 2D atomistic weight. Four shapes are supported:
///  - radial spline  beta(x) = B((R_b - |x|) / (R_b - R_a)),
///  - hexagonal spline, the same with |x| replaced by the hexagon norm of x,
///  - hexagon indicator of Hex(R_a) (the sharp-interface QCF limit),
///  - a constant (1 = fully atomistic, 0 = fully continuum).
/// Positions are in unscaled lattice units.
class Blend2D {
 public:
  enum class Shape { radial, hexagonal, indicator, constant };

  static Blend2D radial(double R_a, double R_b, SplineKind kind);
  static Blend2D hexagonal(double R_a, double R_b, SplineKind kind);
  static Blend2D indicator(int R_a);
  static Blend2D constant(double value);

  Shape shape() const noexcept { return shape_; }
  double inner_radius() const noexcept { return r_a_; }
  double outer_radius() const noexcept { return r_b_; }
  SplineKind spline() const noexcept { return kind_; }

  /// Weight at lattice position x; for the indicator shape the site's integer
  /// coordinates are needed, so use at_site for lattice points.
  double operator()(const Vec2& x) const;
  double at_site(int i, int j, const Vec2& x) const;

 private:
  Shape shape_ = Shape::constant;
  double r_a_ = 0.0;
  double r_b_ = 0.0;
  double value_ = 1.0;
  SplineKind kind_ = SplineKind::cubic;
};

}  // namespace bqcf
