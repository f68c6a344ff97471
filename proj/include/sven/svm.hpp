// Exact solver for the bias-free linear SVM with squared hinge loss.
//
// Primal form over the weight vector w:
//   min  1/2 ||w||^2 + C sum_i max(0, 1 - y_i w.x_i)^2
// and its dual over nonnegative multipliers alpha:
//   min  ||Z a||^2 + 1/(2C) sum_i a_i^2 - 2 sum_i a_i,   a >= 0
// where Z is the d x m matrix whose i-th column is y_i x_i. The two optima
// connect via w = Z a and a_i = 2C * max(0, 1 - y_i w.x_i); at the optimum
// dual_objective = -2 * primal_objective.
//
// Both solvers are Newton methods over an evolving active set. The Newton
// system is solved by a direct SPD factorization while its dimension stays
// below cg_threshold and by Jacobi-preconditioned conjugate gradient above.
#pragma once

#include <Eigen/Core>
#include <optional>

namespace sven {

struct SvmInstance {
  Eigen::MatrixXd samples;  // m x d, one sample per row
  Eigen::VectorXd labels;   // entries exactly +1 / -1
  double C = 1.0;

  Eigen::Index n_samples() const { return samples.rows(); }
  Eigen::Index dim() const { return samples.cols(); }
};

// Checks the shape/label/C invariants; throws DimensionError on violation.
void validate(const SvmInstance& instance);

struct SolverConfig {
  double tol = 1e-8;        // primal: relative gradient norm; dual: KKT residual
  int max_iter = 200;
  int cg_threshold = 2000;  // Newton systems larger than this go to CG
  double cg_tol = 1e-12;
  int cg_max_iter = 10000;
  bool line_search = true;
};

struct PrimalSolution {
  Eigen::VectorXd w;
  Eigen::VectorXd slacks;  // xi_i = max(0, 1 - y_i w.x_i)
  double objective = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
};

struct DualSolution {
  Eigen::VectorXd alpha;   // >= 0 elementwise, exactly (clipped, not rounded)
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

double primal_objective(const SvmInstance& instance, const Eigen::VectorXd& w);

// Analytic gradient of the primal objective: w + 2C X_V' (X_V w - y_V) over
// the violator set V = {i : y_i w.x_i < 1}. Margins exactly 1 do not violate.
Eigen::VectorXd primal_gradient(const SvmInstance& instance,
                                const Eigen::VectorXd& w);

double dual_objective(const SvmInstance& instance, const Eigen::VectorXd& alpha);

PrimalSolution solve_primal(const SvmInstance& instance, const SolverConfig& cfg);

DualSolution solve_dual(const SvmInstance& instance, const SolverConfig& cfg,
                        const std::optional<Eigen::VectorXd>& warm_start = {});

// alpha_i = 2C max(0, 1 - y_i w.x_i); exact dual optimum when w is primal
// optimal.
Eigen::VectorXd primal_to_dual(const SvmInstance& instance,
                               const Eigen::VectorXd& w);

// w = Z alpha = sum_i y_i alpha_i x_i.
Eigen::VectorXd dual_to_primal(const SvmInstance& instance,
                               const Eigen::VectorXd& alpha);

// Largest first-order violation of the dual problem at alpha:
// |g_i| where alpha_i > 0, max(0, -g_i) where alpha_i = 0, with
// g = 2 K alpha + alpha / C - 2. Computed matrix-free (no kernel cache).
double kkt_residual(const SvmInstance& instance, const Eigen::VectorXd& alpha);

}  // namespace sven
