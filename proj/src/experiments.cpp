#include "bqcf/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bqcf/chain1d.hpp"
#include "bqcf/operators2d.hpp"

namespace bqcf {

namespace {

int floor_pow(double base, double exponent) {
  // guard against pow returning 31.999... for an exact integer power
  return static_cast<int>(std::floor(std::pow(base, exponent) + 1e-9));
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// NaN when the blended operator is already indefinite at the start strain
double blended_critical_strain(const OperatorFamily& family, double start, double gamma_max, double dgamma) {
  if (!is_positive_definite(family(start))) return kNaN;
  return critical_strain_linear(family, start, 0.01, gamma_max, dgamma).gamma;
}

}  // namespace

RaRule RaRule::parse(std::string_view text) {
  RaRule r;
  if (text == "pow53") {
    r.kind = Kind::pow53;
  } else if (text == "sqrtn") {
    r.kind = Kind::sqrtn;
  } else if (text == "maxk2") {
    r.kind = Kind::maxk2;
  } else if (text.substr(0, 6) == "fixed:") {
    r.kind = Kind::fixed;
    const auto digits = text.substr(6);
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r.value);
    if (ec != std::errc() || end != digits.data() + digits.size() || r.value < 1) {
      throw std::invalid_argument("bad R_a rule '" + std::string(text) + "'");
    }
  } else {
    throw std::invalid_argument("unknown R_a rule '" + std::string(text) + "'");
  }
  return r;
}

int RaRule::apply(int K, int N) const {
  switch (kind) {
    case Kind::fixed: return value;
    case Kind::pow53: return floor_pow(K, 5.0 / 3.0);
    case Kind::sqrtn: return floor_pow(N, 0.5);
    case Kind::maxk2: return std::max(K * K, 6);
  }
  return 0;
}

std::string RaRule::name() const {
  switch (kind) {
    case Kind::fixed: return "fixed:" + std::to_string(value);
    case Kind::pow53: return "pow53";
    case Kind::sqrtn: return "sqrtn";
    case Kind::maxk2: return "maxk2";
  }
  return "?";
}

std::vector<Expansion1DRow> run_expansion1d(int N, double alpha, SplineKind blend, const std::vector<int>& K_list,
                                            double dgamma, bool nearest_only, int threads) {
  require(N >= 4 && alpha > 0.0 && dgamma > 0.0 && !K_list.empty(), "expansion1d: invalid configuration");
  for (int K : K_list) require(K >= 1 && K < N, "expansion1d: K must lie in [1, N)");
  const PairPotential phi(alpha, nearest_only ? 1 : 2);
  const auto atomistic = critical_strain_linear(
      [&](double F) { return assemble_La_1d(Chain1D(N, Boundary::dirichlet, F), phi); }, 1.0, 0.01, 3.0, dgamma);
  std::vector<Expansion1DRow> rows(K_list.size());
  parallel_for(static_cast<int>(K_list.size()), threads, [&](int k) {
    const int K = K_list[static_cast<std::size_t>(k)];
    const auto profile = BlendProfile1D::from_spline(blend, K, N);
    const double g = blended_critical_strain(
        [&](double F) { return assemble_Lbqcf_1d(Chain1D(N, Boundary::dirichlet, F), phi, profile); }, 1.0, 3.0, dgamma);
    rows[static_cast<std::size_t>(k)] = {K, alpha, blend, atomistic.gamma, g, std::abs(atomistic.gamma - g)};
  });
  return rows;
}

std::vector<Expansion2DRow> run_expansion2d(int N, double alpha, SplineKind blend, const std::vector<int>& K_list,
                                            const RaRule& rule, double dgamma, bool atomistic_blend, int threads) {
  require(N >= 8 && alpha > 0.0 && dgamma > 0.0 && !K_list.empty(), "expansion2d: invalid configuration");
  const PairPotential phi(alpha);
  const auto lattice = TriangularLattice::dirichlet_hexagon(N);
  auto strain = [](double g) { return Mat2(g * Mat2::Identity()); };
  const auto atomistic = critical_strain_linear(
      [&](double g) { return assemble_La_2d(lattice, VacancySet(), strain(g), phi); }, 1.0, 0.01, 2.0, dgamma);
  std::vector<Expansion2DRow> rows(K_list.size());
  parallel_for(static_cast<int>(K_list.size()), threads, [&](int k) {
    const int K = K_list[static_cast<std::size_t>(k)];
    const int R_a = rule.apply(K, N);
    require(K >= 1 && R_a + K < N / 2, "expansion2d: blend region exceeds the domain");
    const Blend2D b = atomistic_blend ? Blend2D::constant(1.0) : Blend2D::radial(R_a, R_a + K, blend);
    const double g = blended_critical_strain(
        [&](double gamma) { return assemble_Lbqcf_2d(lattice, strain(gamma), phi, b); }, 1.0, 2.0, dgamma);
    rows[static_cast<std::size_t>(k)] = {K, R_a, alpha, blend, atomistic.gamma, g, std::abs(atomistic.gamma - g)};
  });
  return rows;
}

std::vector<ShearCase> shear_joint_cases(const std::vector<int>& N_list) {
  std::vector<ShearCase> out;
  for (int N : N_list) out.push_back({N, floor_pow(N, 0.5), floor_pow(N, 0.3)});
  return out;
}

std::vector<ShearCase> shear_fixed_n_cases(int N, const std::vector<int>& K_list, const RaRule& rule) {
  std::vector<ShearCase> out;
  for (int K : K_list) out.push_back({N, rule.apply(K, N), K});
  return out;
}

std::vector<ShearRow> run_shear2d(const std::vector<ShearCase>& cases, double alpha, SplineKind blend, double dgamma,
                                  int threads) {
  require(!cases.empty() && alpha > 0.0 && dgamma > 0.0, "shear2d: invalid configuration");
  for (const auto& c : cases) require(c.K >= 1 && c.R_a >= 0 && c.R_a + c.K < c.N / 2, "shear2d: blend region exceeds the domain");
  const PairPotential phi(alpha);
  auto strain = [](double g) {
    Mat2 B;
    B << 1.0, 0.0, g, 1.0;
    return B;
  };

  std::vector<int> sizes;
  for (const auto& c : cases) {
    if (std::find(sizes.begin(), sizes.end(), c.N) == sizes.end()) sizes.push_back(c.N);
  }
  // tasks: one atomistic run per N, then one blended run per case
  const int n_sizes = static_cast<int>(sizes.size());
  std::vector<double> gamma_a(sizes.size());
  std::vector<double> gamma_b(cases.size());
  parallel_for(n_sizes + static_cast<int>(cases.size()), threads, [&](int task) {
    if (task < n_sizes) {
      const auto lattice = TriangularLattice::dirichlet_hexagon(sizes[static_cast<std::size_t>(task)]);
      gamma_a[static_cast<std::size_t>(task)] =
          critical_strain_linear([&](double g) { return assemble_La_2d(lattice, VacancySet(), strain(g), phi); }, 0.0,
                                 0.01, 1.0, dgamma)
              .gamma;
      return;
    }
    const auto& c = cases[static_cast<std::size_t>(task - n_sizes)];
    const auto lattice = TriangularLattice::dirichlet_hexagon(c.N);
    const Blend2D b = Blend2D::radial(c.R_a, c.R_a + c.K, blend);
    gamma_b[static_cast<std::size_t>(task - n_sizes)] = blended_critical_strain(
        [&](double g) { return assemble_Lbqcf_2d(lattice, strain(g), phi, b); }, 0.0, 1.0, dgamma);
  });

  std::vector<ShearRow> rows;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const auto idx = static_cast<std::size_t>(std::find(sizes.begin(), sizes.end(), c.N) - sizes.begin());
    const double ga = gamma_a[idx];
    rows.push_back({c.N, c.R_a, c.K, ga, gamma_b[k], std::abs(ga - gamma_b[k]) / ga});
  }
  return rows;
}

StabilityRegion run_stabregion(int N, double alpha, int R_a, const std::vector<int>& K_list, int points,
                               double extent, SplineKind blend, int threads) {
  require(N >= 8 && alpha > 0.0 && points >= 2 && extent > 0.0 && R_a >= 1, "stabregion: invalid configuration");
  for (int K : K_list) require(K >= 1 && R_a + K < N / 2, "stabregion: blend region exceeds the domain");
  const PairPotential phi(alpha);
  const auto lattice = TriangularLattice::dirichlet_hexagon(N);
  std::vector<std::pair<std::string, StrainOperatorFamily>> models;
  models.emplace_back("a", [&](const Mat2& B) { return assemble_La_2d(lattice, VacancySet(), B, phi); });
  models.emplace_back("c", [&](const Mat2& B) { return assemble_Lc_2d(lattice, B, phi); });
  models.emplace_back("qcf", [&, R_a](const Mat2& B) { return assemble_Lbqcf_2d(lattice, B, phi, Blend2D::indicator(R_a)); });
  for (int K : K_list) {
    const Blend2D b = Blend2D::radial(R_a, R_a + K, blend);
    models.emplace_back("bqcf_K" + std::to_string(K),
                        [&, b](const Mat2& B) { return assemble_Lbqcf_2d(lattice, B, phi, b); });
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = -extent + 2.0 * extent * k / (points - 1);
  return stability_region(models, grid, grid, 0.1, threads);
}

int symmetric_difference(const StabilityRegion& region, int model_a, int model_b) {
  int count = 0;
  for (int i = 0; i < static_cast<int>(region.s.size()); ++i) {
    for (int j = 0; j < static_cast<int>(region.r.size()); ++j) {
      if (region.at(model_a, i, j) != region.at(model_b, i, j)) ++count;
    }
  }
  return count;
}

NonlinearCriticalResult microcrack_critical_strain(int N, double alpha, const Blend2D& blend, double dgamma,
                                                   int crack_atoms) {
  require(crack_atoms == 0 || (crack_atoms > 0 && crack_atoms % 2 == 1), "microcrack: crack length must be odd");
  const PairPotential phi(alpha);
  const auto lattice = TriangularLattice::dirichlet_hexagon(N);
  const VacancySet vacancies = crack_atoms == 0 ? VacancySet() : VacancySet(lattice, microcrack_sites(crack_atoms / 2));
  ForceModel2D model = make_lattice_model(lattice, vacancies, phi, blend, Mat2::Identity());
  NonlinearCase loading{[](double g) {
    Mat2 B;
    B << 1.0, 0.0, 0.0, 1.0 + g;
    return B;
  }};
  NewtonOptions opt;
  opt.residual_scale = N;
  return critical_strain_nonlinear(model, loading, 0.0, 0.005, 0.5, dgamma, opt);
}

std::vector<MicrocrackRow> run_microcrack(const std::vector<MicrocrackCase>& cases, double alpha, SplineKind blend,
                                          double dgamma, int crack_atoms, int threads) {
  require(!cases.empty() && alpha > 0.0 && dgamma > 0.0, "microcrack: invalid configuration");
  for (const auto& c : cases) {
    require(c.K >= 1 && c.R_a > crack_atoms / 2 + 2 && c.R_a + c.K < c.N / 2, "microcrack: invalid R_a or K");
  }
  std::vector<int> sizes;
  for (const auto& c : cases) {
    if (std::find(sizes.begin(), sizes.end(), c.N) == sizes.end()) sizes.push_back(c.N);
  }
  const int n_sizes = static_cast<int>(sizes.size());
  std::vector<double> gamma_a(sizes.size());
  std::vector<double> gamma_b(cases.size());
  parallel_for(n_sizes + static_cast<int>(cases.size()), threads, [&](int task) {
    if (task < n_sizes) {
      gamma_a[static_cast<std::size_t>(task)] =
          microcrack_critical_strain(sizes[static_cast<std::size_t>(task)], alpha, Blend2D::constant(1.0), dgamma,
                                     crack_atoms)
              .strain.gamma;
      return;
    }
    const auto& c = cases[static_cast<std::size_t>(task - n_sizes)];
    gamma_b[static_cast<std::size_t>(task - n_sizes)] =
        microcrack_critical_strain(c.N, alpha, Blend2D::radial(c.R_a, c.R_a + c.K, blend), dgamma, crack_atoms)
            .strain.gamma;
  });
  std::vector<MicrocrackRow> rows;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const auto idx = static_cast<std::size_t>(std::find(sizes.begin(), sizes.end(), c.N) - sizes.begin());
    const double ga = gamma_a[idx];
    rows.push_back({c.K, c.R_a, c.N, ga, gamma_b[k], std::abs(ga - gamma_b[k]) / ga});
  }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const std::vector<Expansion1DRow>& rows) {
  std::ostringstream os;
  os << "K,alpha,blend,gamma_a,gamma_bqcf,abs_err\n";
  for (const auto& r : rows) {
    os << r.K << ',' << format_double(r.alpha) << ',' << to_string(r.blend) << ',' << format_double(r.gamma_a) << ','
       << format_double(r.gamma_bqcf) << ',' << format_double(r.abs_err) << '\n';
  }
  return os.str();
}

std::string to_csv(const std::vector<Expansion2DRow>& rows) {
  std::ostringstream os;
  os << "K,Ra,alpha,blend,gamma_a,gamma_bqcf,abs_err\n";
  for (const auto& r : rows) {
    os << r.K << ',' << r.R_a << ',' << format_double(r.alpha) << ',' << to_string(r.blend) << ','
       << format_double(r.gamma_a) << ',' << format_double(r.gamma_bqcf) << ',' << format_double(r.abs_err) << '\n';
  }
  return os.str();
}

std::string to_csv(const std::vector<ShearRow>& rows) {
  std::ostringstream os;
  os << "N,Ra,K,gamma_a,gamma_bqcf,rel_err\n";
  for (const auto& r : rows) {
    os << r.N << ',' << r.R_a << ',' << r.K << ',' << format_double(r.gamma_a) << ',' << format_double(r.gamma_bqcf)
       << ',' << format_double(r.rel_err) << '\n';
  }
  return os.str();
}

std::string to_csv(const StabilityRegion& region) {
  std::ostringstream os;
  os << "model,s,r,stable\n";
  for (std::size_t m = 0; m < region.models.size(); ++m) {
    for (std::size_t i = 0; i < region.s.size(); ++i) {
      for (std::size_t j = 0; j < region.r.size(); ++j) {
        os << region.models[m] << ',' << format_double(region.s[i]) << ',' << format_double(region.r[j]) << ','
           << (region.at(static_cast<int>(m), static_cast<int>(i), static_cast<int>(j)) ? 1 : 0) << '\n';
      }
    }
  }
  return os.str();
}

std::string to_csv(const std::vector<MicrocrackRow>& rows) {
  std::ostringstream os;
  os << "K,Ra,N,gamma_a,gamma_bqcf,rel_err\n";
  for (const auto& r : rows) {
    os << r.K << ',' << r.R_a << ',' << r.N << ',' << format_double(r.gamma_a) << ',' << format_double(r.gamma_bqcf)
       << ',' << format_double(r.rel_err) << '\n';
  }
  return os.str();
}

std::string to_csv(const std::vector<BenchmarkRecord>& rows) {
  std::ostringstream os;
  os << "method,case,Ra,K,N,dof,err\n";
  for (const auto& r : rows) {
    os << to_string(r.method) << ',' << to_string(r.defect) << ',' << r.R_a << ',' << r.K << ',' << r.N << ',' << r.dof
       << ',' << format_double(r.error) << '\n';
  }
  return os.str();
}

}  // namespace bqcf
