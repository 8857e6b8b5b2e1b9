#include "bqcf/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "factor.hpp"

namespace bqcf {

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string_view to_string(Divergence reason) {
  switch (reason) {
    case Divergence::none: return "none";
    case Divergence::residual_blowup: return "residual_blowup";
    case Divergence::indefinite: return "indefinite";
    case Divergence::max_iter: return "max_iter";
  }
  return "?";
}

namespace {

bool jacobian_definite(const SparseMatrix& J) {
  AssembledOperator op;
  op.matrix = J;
  op.boundary = Boundary::dirichlet;
  return is_positive_definite(op);
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

NewtonReport newton_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& force,
                          const std::function<SparseMatrix(const Eigen::VectorXd&)>& jacobian, Eigen::VectorXd& x,
                          const NewtonOptions& options) {
  if (!x.allFinite()) throw std::invalid_argument("newton_solve: non-finite initial guess");
  NewtonReport rep;
  Eigen::VectorXd F = force(x);
  for (;;) {
    const double res = options.residual_scale * inf_norm(F);
    rep.residual = res;
    rep.history.push_back(res);
    if (!std::isfinite(res) || res >= options.blowup) {
      rep.reason = Divergence::residual_blowup;
      return rep;
    }
    if (res <= options.tol) {
      rep.converged = true;
      rep.positive_definite = options.check_final_definiteness ? jacobian_definite(jacobian(x)) : true;
      return rep;
    }
    if (rep.iterations >= options.max_iter) {
      rep.reason = Divergence::max_iter;
      return rep;
    }
    const SparseMatrix J = jacobian(x);
    if (options.guard_definiteness && !jacobian_definite(J)) {
      rep.reason = Divergence::indefinite;
      return rep;
    }
    detail::LuFactor lu;
    if (!lu.compute(J)) {
      rep.reason = Divergence::indefinite;
      return rep;
    }
    const Eigen::VectorXd dx = lu.solve(F);
    if (!dx.allFinite()) {
      rep.reason = Divergence::indefinite;
      return rep;
    }
    ++rep.iterations;
    if (options.max_halvings <= 0) {
      x += dx;
      F = force(x);
      continue;
    }
    const double base = F.norm();
    double step = 1.0;
    Eigen::VectorXd trial = x + dx;
    Eigen::VectorXd Ft = force(trial);
    for (int h = 0; h < options.max_halvings && !(Ft.allFinite() && Ft.norm() <= base); ++h) {
      step *= 0.5;
      trial = x + step * dx;
      Ft = force(trial);
    }
    x = std::move(trial);
    F = std::move(Ft);
  }
}

CriticalStrainResult critical_strain_linear(const OperatorFamily& family, double gamma_start, double step,
                                            double gamma_max, double dgamma, double rel_threshold) {
  if (!(step > 0.0) || !(dgamma > 0.0) || !(gamma_max > gamma_start)) {
    throw std::invalid_argument("critical strain search needs step, dgamma > 0 and gamma_max > gamma_start");
  }
  CriticalStrainResult out;
  out.resolution = dgamma;
  auto stable = [&](double g) {
    const AssembledOperator op = family(g);
    out.model = op.model;
    const bool s = is_positive_definite(op, rel_threshold);
    out.history.emplace_back(g, s);
    return s;
  };
  if (!stable(gamma_start)) throw std::runtime_error("critical strain search: start point is unstable");
  double lo = gamma_start;
  double hi = gamma_start;
  bool found = false;
  for (long k = 1; !found; ++k) {
    hi = std::min(gamma_start + static_cast<double>(k) * step, gamma_max);
    if (!stable(hi)) {
      found = true;
    } else {
      lo = hi;
      if (hi >= gamma_max) break;
    }
  }
  if (!found) throw std::runtime_error("critical strain search: no instability up to gamma_max");
  while (hi - lo > dgamma) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? lo : hi) = mid;
  }
  out.gamma = lo;
  out.first_unstable = hi;
  out.verified = true;
  for (int k = 1; k <= 8; ++k) {
    if (stable(hi + k * dgamma)) out.verified = false;
  }
  return out;
}

StabilityRegion stability_region(const std::vector<std::pair<std::string, StrainOperatorFamily>>& models,
                                 const std::vector<double>& s_grid, const std::vector<double>& r_grid, double shear,
                                 int threads) {
  StabilityRegion reg;
  reg.s = s_grid;
  reg.r = r_grid;
  reg.shear = shear;
  for (const auto& m : models) reg.models.push_back(m.first);
  const int cells = static_cast<int>(s_grid.size() * r_grid.size());
  reg.stable.assign(models.size(), std::vector<char>(static_cast<std::size_t>(cells), 0));
  parallel_for(cells * static_cast<int>(models.size()), threads, [&](int task) {
    const int m = task / cells;
    const int cell = task % cells;
    const double s = s_grid[static_cast<std::size_t>(cell) / r_grid.size()];
    const double r = r_grid[static_cast<std::size_t>(cell) % r_grid.size()];
    Mat2 B;
    B << 1.0 + s, shear, 0.0, 1.0 + r;
    bool ok = false;
    try {
      ok = is_positive_definite(models[static_cast<std::size_t>(m)].second(B));
    } catch (const std::domain_error&) {
      ok = false;
    }
    reg.stable[static_cast<std::size_t>(m)][static_cast<std::size_t>(cell)] = ok ? 1 : 0;
  });
  return reg;
}

NonlinearCriticalResult critical_strain_nonlinear(ForceModel2D& model, const NonlinearCase& loading,
                                                  double gamma_start, double step, double gamma_max, double dgamma,
                                                  const NewtonOptions& options) {
  if (!(step > 0.0) || !(dgamma > 0.0) || !(gamma_max > gamma_start)) {
    throw std::invalid_argument("critical strain search needs step, dgamma > 0 and gamma_max > gamma_start");
  }
  NonlinearCriticalResult out;
  out.strain.resolution = dgamma;
  out.strain.model = ModelTag::bqcf;
  Eigen::VectorXd state = Eigen::VectorXd::Zero(model.num_free_dofs());

  // solve at g from `from`; on success the equilibrium is left in `from`
  auto attempt = [&](double g, Eigen::VectorXd& from) {
    model.set_B(loading.B(g));
    Eigen::VectorXd x = from;
    NewtonReport rep;
    try {
      rep = newton_solve([&](const Eigen::VectorXd& v) { return model.residual(model.expand(v)); },
                         [&](const Eigen::VectorXd& v) { return model.jacobian(model.expand(v)); }, x, options);
    } catch (const std::domain_error&) {
      rep.converged = false;
    }
    ++out.newton_solves;
    const bool ok = rep.converged && rep.positive_definite;
    out.strain.history.emplace_back(g, ok);
    if (ok) from = std::move(x);
    return ok;
  };

  if (!attempt(gamma_start, state)) throw std::runtime_error("nonlinear critical strain: start point is unstable");
  double lo = gamma_start;
  double hi = gamma_start;
  bool found = false;
  for (long k = 1; !found; ++k) {
    hi = std::min(gamma_start + static_cast<double>(k) * step, gamma_max);
    Eigen::VectorXd trial = state;
    if (!attempt(hi, trial)) {
      found = true;
    } else {
      state = std::move(trial);
      lo = hi;
      if (hi >= gamma_max) break;
    }
  }
  if (!found) throw std::runtime_error("nonlinear critical strain: no instability up to gamma_max");
  while (hi - lo > dgamma) {
    const double mid = 0.5 * (lo + hi);
    Eigen::VectorXd trial = state;
    if (attempt(mid, trial)) {
      state = std::move(trial);
      lo = mid;
    } else {
      hi = mid;
    }
  }
  model.set_B(loading.B(lo));
  out.strain.gamma = lo;
  out.strain.first_unstable = hi;
  out.state = model.expand(state);
  return out;
}

Eigen::VectorXd critical_eigenmode(const AssembledOperator& op) {
  Eigen::VectorXd v = min_eig_sym(op).vector;
  Eigen::Index arg = 0;
  const double m = v.cwiseAbs().maxCoeff(&arg);
  if (m == 0.0) throw std::runtime_error("zero eigenvector");
  return v / (v[arg] > 0.0 ? m : -m);
}

}  // namespace bqcf
