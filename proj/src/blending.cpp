#include "bqcf/blending.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bqcf/lattice2d.hpp"

namespace bqcf {

SplineKind parse_spline_kind(std::string_view name) {
  if (name == "cubic") return SplineKind::cubic;
  if (name == "quintic") return SplineKind::quintic;
  throw std::invalid_argument("unknown blend spline '" + std::string(name) + "'");
}

std::string_view to_string(SplineKind kind) {
  return kind == SplineKind::cubic ? "cubic" : "quintic";
}

double spline_eval(SplineKind kind, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (kind == SplineKind::cubic) return x * x * (3.0 - 2.0 * x);
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double spline_derivative(SplineKind kind, double x, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("spline derivative order must be 1..3");
  if (x < 0.0 || x > 1.0) return 0.0;
  if (kind == SplineKind::cubic) {
    switch (order) {
      case 1: return 6.0 * x - 6.0 * x * x;
      case 2: return 6.0 - 12.0 * x;
      default: return -12.0;
    }
  }
  switch (order) {
    case 1: return 30.0 * x * x * (x - 1.0) * (x - 1.0);
    case 2: return 60.0 * x * (2.0 * x * x - 3.0 * x + 1.0);
    default: return 60.0 * (6.0 * x * x - 6.0 * x + 1.0);
  }
}

BlendProfile1D BlendProfile1D::from_spline(SplineKind kind, int K, int N) {
  if (K < 1) throw std::invalid_argument("blend width K must be >= 1");
  if (N < 2) throw std::invalid_argument("chain half-period N must be >= 2");
  std::vector<double> values(static_cast<std::size_t>(2 * N));
  for (int l = -N + 1; l <= N; ++l) {
    values[static_cast<std::size_t>(l + N - 1)] =
        spline_eval(kind, static_cast<double>(l) / static_cast<double>(K));
  }
  return BlendProfile1D(std::move(values), K);
}

BlendProfile1D BlendProfile1D::constant(double value, int N) {
  if (value < 0.0 || value > 1.0) throw std::invalid_argument("blend weight outside [0, 1]");
  return BlendProfile1D(std::vector<double>(static_cast<std::size_t>(2 * N), value), 0);
}

BlendProfile1D BlendProfile1D::from_values(std::vector<double> values) {
  if (values.size() < 4 || values.size() % 2 != 0) {
    throw std::invalid_argument("blend profile needs an even number (>= 4) of sites");
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("blend weight outside [0, 1]");
  }
  return BlendProfile1D(std::move(values), 0);
}

std::vector<int> BlendProfile1D::support_set() const {
  const int n = size();
  const int N = half_period();
  std::vector<int> result;
  for (int i = 0; i < n; ++i) {
    for (int j = -2; j <= 2; ++j) {
      const int k = i + j;
      if (k < 0 || k >= n) continue;
      const double b = values_[static_cast<std::size_t>(k)];
      if (b > 0.0 && b < 1.0) {
        result.push_back(i - N + 1);
        break;
      }
    }
  }
  return result;
}

DerivativeSupNorms derivative_sup_norms(const BlendProfile1D& profile, double epsilon) {
  const auto& b = profile.values();
  const int n = profile.size();
  DerivativeSupNorms out;
  auto d1 = [&](int i) { return (b[i] - b[i - 1]) / epsilon; };
  auto d2 = [&](int i) { return (d1(i + 1) - d1(i)) / epsilon; };
  auto d3 = [&](int i) { return (d2(i) - d2(i - 1)) / epsilon; };
  for (int i = 1; i < n; ++i) out.d1 = std::max(out.d1, std::abs(d1(i)));
  for (int i = 1; i + 1 < n; ++i) out.d2 = std::max(out.d2, std::abs(d2(i)));
  for (int i = 2; i + 1 < n; ++i) out.d3 = std::max(out.d3, std::abs(d3(i)));
  return out;
}

Blend2D Blend2D::radial(double R_a, double R_b, SplineKind kind) {
  if (!(R_a >= 0.0) || !(R_b > R_a)) throw std::invalid_argument("radial blend needs 0 <= R_a < R_b");
  Blend2D b;
  b.shape_ = Shape::radial;
  b.r_a_ = R_a;
  b.r_b_ = R_b;
  b.kind_ = kind;
  return b;
}

Blend2D Blend2D::hexagonal(double R_a, double R_b, SplineKind kind) {
  if (!(R_a >= 0.0) || !(R_b > R_a)) throw std::invalid_argument("hexagonal blend needs 0 <= R_a < R_b");
  Blend2D b = radial(R_a, R_b, kind);
  b.shape_ = Shape::hexagonal;
  return b;
}

Blend2D Blend2D::indicator(int R_a) {
  if (R_a < 0) throw std::invalid_argument("indicator blend needs R_a >= 0");
  Blend2D b;
  b.shape_ = Shape::indicator;
  b.r_a_ = R_a;
  b.r_b_ = R_a;
  return b;
}

Blend2D Blend2D::constant(double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("blend weight outside [0, 1]");
  Blend2D b;
  b.shape_ = Shape::constant;
  b.value_ = value;
  return b;
}

double hex_radius(const Vec2& x) {
  const double j = x.y() * 2.0 / std::sqrt(3.0);
  const double i = x.x() - 0.5 * j;
  return std::max({std::abs(i), std::abs(j), std::abs(i + j)});
}

double Blend2D::operator()(const Vec2& x) const {
  switch (shape_) {
    case Shape::constant: return value_;
    case Shape::radial: return spline_eval(kind_, (r_b_ - x.norm()) / (r_b_ - r_a_));
    case Shape::hexagonal: return spline_eval(kind_, (r_b_ - hex_radius(x)) / (r_b_ - r_a_));
    case Shape::indicator: return hex_radius(x) <= r_a_ + 1e-9 ? 1.0 : 0.0;
  }
  return 0.0;
}

double Blend2D::at_site(int i, int j, const Vec2& x) const {
  if (shape_ == Shape::indicator) return hex_norm(i, j) <= static_cast<int>(r_a_) ? 1.0 : 0.0;
  return (*this)(x);
}

}  // namespace bqcf
