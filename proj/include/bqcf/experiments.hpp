#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bqcf/blending.hpp"
#include "bqcf/coarse.hpp"
#include "bqcf/stability.hpp"

namespace bqcf {

/// Atomistic region radius as a function of K and N.
struct RaRule {
  enum class Kind { fixed, pow53, sqrtn, maxk2 };
  Kind kind = Kind::pow53;
  int value = 0;

  /// "fixed:<v>", "pow53" (floor K^{5/3}), "sqrtn" (floor sqrt N), "maxk2" (max(K^2, 6)).
  static RaRule parse(std::string_view text);
  int apply(int K, int N) const;
  std::string name() const;
};

struct Expansion1DRow {
  int K = 0;
  double alpha = 0.0;
  SplineKind blend = SplineKind::quintic;
  double gamma_a = 0.0;
  double gamma_bqcf = 0.0;
  double abs_err = 0.0;
};

/// Uniform expansion y = F x of the Dirichlet chain with 2N sites; the strain is
/// marched from F = 1 in steps of 0.01 and bisected to dgamma.
std::vector<Expansion1DRow> run_expansion1d(int N, double alpha, SplineKind blend, const std::vector<int>& K_list,
                                            double dgamma, bool nearest_only = false, int threads = 1);

struct Expansion2DRow {
  int K = 0;
  int R_a = 0;
  double alpha = 0.0;
  SplineKind blend = SplineKind::quintic;
  double gamma_a = 0.0;
  double gamma_bqcf = 0.0;
  double abs_err = 0.0;
};

/// B = gamma I on the Dirichlet hexagon of side N/2 with a radial blend from R_a
/// to R_a + K. `atomistic_blend` replaces the blend by beta = 1 (debug).
/// gamma_bqcf is NaN when the blended operator is indefinite at gamma = 1.
std::vector<Expansion2DRow> run_expansion2d(int N, double alpha, SplineKind blend, const std::vector<int>& K_list,
                                            const RaRule& rule, double dgamma, bool atomistic_blend = false,
                                            int threads = 1);

struct ShearCase {
  int N = 0;
  int R_a = 0;
  int K = 0;
};

struct ShearRow {
  int N = 0;
  int R_a = 0;
  int K = 0;
  double gamma_a = 0.0;
  double gamma_bqcf = 0.0;
  double rel_err = 0.0;
};

/// y-directional shear B = [[1, 0], [gamma, 1]] from gamma = 0. The atomistic
/// critical strain is computed once per N.
std::vector<ShearRow> run_shear2d(const std::vector<ShearCase>& cases, double alpha, SplineKind blend, double dgamma,
                                  int threads = 1);
/// Cases with K = floor(N^{3/10}) and R_a = floor(N^{1/2}) for every N.
std::vector<ShearCase> shear_joint_cases(const std::vector<int>& N_list);
/// Cases at fixed N with R_a from `rule` for every K.
std::vector<ShearCase> shear_fixed_n_cases(int N, const std::vector<int>& K_list, const RaRule& rule);

/// Models "a", "c", "qcf" and "bqcf_K<k>" for each K on a uniform grid of
/// `points` values of s and r in [-extent, extent].
StabilityRegion run_stabregion(int N, double alpha, int R_a, const std::vector<int>& K_list, int points = 41,
                               double extent = 0.1, SplineKind blend = SplineKind::quintic, int threads = 1);
/// Grid cells stable for exactly one of the two models.
int symmetric_difference(const StabilityRegion& region, int model_a, int model_b);

struct MicrocrackCase {
  int N = 0;
  int R_a = 0;
  int K = 0;
};

struct MicrocrackRow {
  int K = 0;
  int R_a = 0;
  int N = 0;
  double gamma_a = 0.0;
  double gamma_bqcf = 0.0;
  double rel_err = 0.0;
};

/// Vertical stretch B = diag(1, 1 + gamma) of a lattice with a straight crack
/// of `crack_atoms` removed atoms (odd, centred). The state operator is checked
/// along a Newton continuation with tolerance 1e-5 on the scaled residual.
std::vector<MicrocrackRow> run_microcrack(const std::vector<MicrocrackCase>& cases, double alpha, SplineKind blend,
                                          double dgamma, int crack_atoms = 5, int threads = 1);
/// Nonlinear critical strain of one model (blend constant 1 gives the atomistic value).
NonlinearCriticalResult microcrack_critical_strain(int N, double alpha, const Blend2D& blend, double dgamma,
                                                   int crack_atoms = 5);

/// CSV serialisation with 17 significant digits and the fixed headers.
std::string format_double(double v);
std::string to_csv(const std::vector<Expansion1DRow>& rows);
std::string to_csv(const std::vector<Expansion2DRow>& rows);
std::string to_csv(const std::vector<ShearRow>& rows);
std::string to_csv(const StabilityRegion& region);
std::string to_csv(const std::vector<MicrocrackRow>& rows);
std::string to_csv(const std::vector<BenchmarkRecord>& rows);

}  // namespace bqcf
