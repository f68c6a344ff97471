#include "sven/reduction.hpp"

#include <chrono>
#include <cmath>

#include "sven/errors.hpp"

namespace sven {

const char* route_name(Route route) {
  return route == Route::primal ? "primal" : "dual";
}

SvmInstance build_svm_instance(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               double t) {
  if (!(t > 0.0)) throw DimensionError("t must be positive");
  if (X.rows() != y.size()) throw DimensionError("X and y row counts differ");
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();

  SvmInstance instance;
  instance.samples.resize(2 * p, n);
  instance.labels.resize(2 * p);
  const Eigen::VectorXd shift = y / t;
  for (Eigen::Index j = 0; j < p; ++j) {
    instance.samples.row(j) = (X.col(j) - shift).transpose();
    instance.samples.row(p + j) = (X.col(j) + shift).transpose();
    instance.labels[j] = 1.0;
    instance.labels[p + j] = -1.0;
  }
  return instance;
}

Eigen::VectorXd recover_beta(const Eigen::VectorXd& alpha, double t) {
  if (!(t > 0.0)) throw DimensionError("t must be positive");
  if (alpha.size() % 2 != 0 || alpha.size() == 0) {
    throw DimensionError("alpha must have length 2p");
  }
  if ((alpha.array() < 0.0).any()) throw Error("alpha has a negative entry");
  const double total = alpha.sum();
  if (total <= 0.0) {
    throw DegenerateSolutionError(
        "sum(alpha) = 0: the SVM selected no support vectors");
  }
  const Eigen::Index p = alpha.size() / 2;
  return t * (alpha.head(p) - alpha.tail(p)) / total;
}

ElasticNetSolution sven_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              double t, double lambda2, const SolverConfig& cfg,
                              const ReductionOptions& opts) {
  if (lambda2 < 0.0) throw DimensionError("lambda2 must be nonnegative");
  const auto start = std::chrono::steady_clock::now();

  SvmInstance instance = build_svm_instance(X, y, t);
  instance.C = lambda2 > 0.0 ? 1.0 / (2.0 * lambda2) : opts.lasso_c_cap;

  const Route route = opts.force_route.value_or(
      2 * X.cols() > X.rows() ? Route::primal : Route::dual);

  ElasticNetSolution sol;
  sol.t = t;
  sol.lambda2 = lambda2;
  sol.route = route;

  if (route == Route::primal) {
    PrimalSolution primal = solve_primal(instance, cfg);
    sol.alpha = primal_to_dual(instance, primal.w);
    sol.stats.iterations = primal.iterations;
    sol.stats.residual = primal.grad_norm;
  } else {
    DualSolution dual = solve_dual(instance, cfg, opts.warm_alpha);
    sol.alpha = std::move(dual.alpha);
    sol.stats.iterations = dual.iterations;
    sol.stats.residual = dual.kkt_residual;
  }
  sol.stats.tol_met = true;  // both solvers throw on non-convergence
  sol.beta = recover_beta(sol.alpha, t);
  sol.alpha_sum = sol.alpha.sum();

  sol.stats.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  return sol;
}

}  // namespace sven
