#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bqcf/coarse.hpp"
#include "bqcf/experiments.hpp"

namespace {

struct Config {
  std::vector<int> n;
  double alpha = 0.0;
  std::string blend = "quintic";
  std::vector<int> k_list;
  double dgamma = 0.0;
  std::string ra_rule;
  std::string out;
  int threads = 1;
  bool debug_trivial = false;
  int points = 41;
  double extent = 0.1;
  std::string defect = "divacancy";
  std::vector<std::string> methods{"atm", "qcf", "bqcf"};
  std::vector<int> ra_list{6, 10, 16, 24};
  int rref = 48;
  int crack = 5;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void write_output(const Config& cfg, const std::string& csv) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << csv;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + cfg.out);
  f << csv;
}

int single_n(const Config& cfg, int fallback) {
  check(cfg.n.size() <= 1, "--n takes a single value for this command");
  return cfg.n.empty() ? fallback : cfg.n.front();
}

void validate_common(const Config& cfg) {
  for (int v : cfg.n) check(v > 0, "--n must be positive");
  for (int v : cfg.k_list) check(v > 0, "--k-list entries must be positive");
  check(cfg.alpha > 0.0, "--alpha must be positive");
  check(cfg.dgamma > 0.0, "--dgamma must be positive");
  check(cfg.threads >= 1, "--threads must be positive");
}

std::string cmd_expansion1d(Config cfg) {
  const int N = single_n(cfg, 40000);
  if (cfg.alpha == 0.0) cfg.alpha = 3.0;
  if (cfg.dgamma == 0.0) cfg.dgamma = 1.0 / (static_cast<double>(N) * N);
  if (cfg.k_list.empty()) cfg.k_list = {4, 8, 16, 32, 64};
  validate_common(cfg);
  return bqcf::to_csv(bqcf::run_expansion1d(N, cfg.alpha, bqcf::parse_spline_kind(cfg.blend), cfg.k_list, cfg.dgamma,
                                            cfg.debug_trivial, cfg.threads));
}

std::string cmd_expansion2d(Config cfg) {
  const int N = single_n(cfg, 100);
  if (cfg.alpha == 0.0) cfg.alpha = 4.0;
  if (cfg.dgamma == 0.0) cfg.dgamma = 1e-8;
  if (cfg.k_list.empty()) cfg.k_list = {2, 3, 4, 5, 6};
  validate_common(cfg);
  const auto rule = bqcf::RaRule::parse(cfg.ra_rule.empty() ? "pow53" : cfg.ra_rule);
  return bqcf::to_csv(bqcf::run_expansion2d(N, cfg.alpha, bqcf::parse_spline_kind(cfg.blend), cfg.k_list, rule,
                                            cfg.dgamma, cfg.debug_trivial, cfg.threads));
}

std::string cmd_shear2d(Config cfg) {
  if (cfg.n.empty()) cfg.n = {50, 100, 200};
  if (cfg.alpha == 0.0) cfg.alpha = 4.0;
  if (cfg.dgamma == 0.0) cfg.dgamma = 1e-6;
  validate_common(cfg);
  std::vector<bqcf::ShearCase> cases;
  if (cfg.k_list.empty()) {
    cases = bqcf::shear_joint_cases(cfg.n);
  } else {
    const auto rule = bqcf::RaRule::parse(cfg.ra_rule.empty() ? "pow53" : cfg.ra_rule);
    for (int N : cfg.n) {
      const auto c = bqcf::shear_fixed_n_cases(N, cfg.k_list, rule);
      cases.insert(cases.end(), c.begin(), c.end());
    }
  }
  return bqcf::to_csv(bqcf::run_shear2d(cases, cfg.alpha, bqcf::parse_spline_kind(cfg.blend), cfg.dgamma, cfg.threads));
}

std::string cmd_stabregion(Config cfg) {
  const int N = single_n(cfg, 50);
  if (cfg.alpha == 0.0) cfg.alpha = 4.0;
  if (cfg.dgamma == 0.0) cfg.dgamma = 1.0;
  if (cfg.k_list.empty()) cfg.k_list = {2, 4};
  validate_common(cfg);
  check(cfg.points >= 2, "--points must be at least 2");
  const auto rule = bqcf::RaRule::parse(cfg.ra_rule.empty() ? "fixed:8" : cfg.ra_rule);
  return bqcf::to_csv(bqcf::run_stabregion(N, cfg.alpha, rule.apply(cfg.k_list.front(), N), cfg.k_list, cfg.points,
                                           cfg.extent, bqcf::parse_spline_kind(cfg.blend), cfg.threads));
}

std::string cmd_microcrack(Config cfg) {
  if (cfg.n.empty()) cfg.n = {50, 100, 200};
  if (cfg.alpha == 0.0) cfg.alpha = 4.0;
  if (cfg.dgamma == 0.0) cfg.dgamma = 1e-6;
  validate_common(cfg);
  check(cfg.crack % 2 == 1, "--crack must be a positive odd number");
  const auto rule = bqcf::RaRule::parse(cfg.ra_rule.empty() ? "sqrtn" : cfg.ra_rule);
  std::vector<bqcf::MicrocrackCase> cases;
  for (int N : cfg.n) {
    const int R_a = rule.apply(0, N);
    std::vector<int> ks = cfg.k_list;
    if (ks.empty()) ks = {2, static_cast<int>(std::floor(std::pow(R_a, 0.6) + 1e-9)) + 2};
    for (int K : ks) cases.push_back({N, rule.apply(K, N), K});
  }
  if (cfg.debug_trivial) cfg.crack = 0;
  return bqcf::to_csv(
      bqcf::run_microcrack(cases, cfg.alpha, bqcf::parse_spline_kind(cfg.blend), cfg.dgamma, cfg.crack, cfg.threads));
}

std::string cmd_accuracy(Config cfg) {
  if (cfg.alpha == 0.0) cfg.alpha = 4.0;
  if (cfg.dgamma == 0.0) cfg.dgamma = 1.0;
  validate_common(cfg);
  check(!cfg.methods.empty(), "--methods must not be empty");
  check(!cfg.ra_list.empty(), "--ra-list must not be empty");
  std::vector<bqcf::CoarseMethod> methods;
  for (const auto& m : cfg.methods) methods.push_back(bqcf::parse_coarse_method(m));
  const auto result = bqcf::run_benchmark(bqcf::parse_defect_case(cfg.defect), methods, cfg.ra_list,
                                          bqcf::PairPotential(cfg.alpha), cfg.rref, cfg.threads);
  for (const auto& r : result.records) {
    if (!r.converged) throw std::runtime_error("solver failed for " + std::string(bqcf::to_string(r.method)) +
                                               " R_a=" + std::to_string(r.R_a));
  }
  return bqcf::to_csv(result.records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blended force-based quasicontinuum experiments"};
  app.require_subcommand(1, 1);
  Config cfg;

  auto add_common = [&](CLI::App* sub, bool n_list) {
    if (n_list) {
      sub->add_option("--n", cfg.n, "lattice size N (list allowed)")->delimiter(',');
    } else {
      sub->add_option("--n", cfg.n, "lattice size N")->expected(1);
    }
    sub->add_option("--alpha", cfg.alpha, "Morse stiffness");
    sub->add_option("--blend", cfg.blend, "blending spline")->check(CLI::IsMember({"cubic", "quintic"}));
    sub->add_option("--k-list", cfg.k_list, "blending widths")->delimiter(',');
    sub->add_option("--dgamma", cfg.dgamma, "critical strain resolution");
    sub->add_option("--ra-rule", cfg.ra_rule, "fixed:<v> | pow53 | sqrtn | maxk2");
    sub->add_option("--out", cfg.out, "output CSV (stdout when absent)");
    sub->add_option("--threads", cfg.threads, "worker threads");
  };

  auto* e1 = app.add_subcommand("expansion1d", "1D uniform expansion");
  add_common(e1, false);
  e1->add_flag("--nearest-only", cfg.debug_trivial, "nearest-neighbour interactions only");
  auto* e2 = app.add_subcommand("expansion2d", "2D uniform expansion");
  add_common(e2, false);
  e2->add_flag("--atomistic-blend", cfg.debug_trivial, "replace the blend by beta = 1");
  auto* sh = app.add_subcommand("shear2d", "2D y-directional shear");
  add_common(sh, true);
  auto* sr = app.add_subcommand("stabregion", "stability regions in (s, r)");
  add_common(sr, false);
  sr->add_option("--points", cfg.points, "grid points per axis");
  sr->add_option("--extent", cfg.extent, "half-width of the (s, r) window");
  auto* mc = app.add_subcommand("microcrack", "nonlinear stability of a micro-crack");
  add_common(mc, true);
  mc->add_option("--crack", cfg.crack, "number of removed atoms (odd)");
  mc->add_flag("--no-crack", cfg.debug_trivial, "no vacancies");
  auto* ac = app.add_subcommand("accuracy", "coarse-grained error versus DoF");
  add_common(ac, false);
  ac->add_option("--case", cfg.defect, "divacancy | microcrack");
  ac->add_option("--methods", cfg.methods, "atm, qcf, bqcf")->delimiter(',');
  ac->add_option("--ra-list", cfg.ra_list, "atomistic radii")->delimiter(',');
  ac->add_option("--rref", cfg.rref, "atomistic radius of the reference solution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string csv;
    if (*e1) csv = cmd_expansion1d(cfg);
    if (*e2) csv = cmd_expansion2d(cfg);
    if (*sh) csv = cmd_shear2d(cfg);
    if (*sr) csv = cmd_stabregion(cfg);
    if (*mc) csv = cmd_microcrack(cfg);
    if (*ac) csv = cmd_accuracy(cfg);
    write_output(cfg, csv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
