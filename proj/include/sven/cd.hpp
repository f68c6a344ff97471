// Coordinate-descent Elastic Net solver in penalized form:
//
//   min_beta  ||X beta - y||^2 + lambda2 ||beta||^2 + lambda1 |beta|_1
//
// on standardized data (unit-L2 columns, centered y). This solver is kept
// deliberately independent of the SVM reduction; it is the correctness
// oracle the reduction is checked against, and the path generator.
#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace sven {

struct PenalizedSpec {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double tol = 1e-10;      // max absolute coordinate change per sweep
  int max_sweeps = 10000;

  void validate() const;
};

// sign(z) * max(|z| - gamma, 0)
double soft_threshold(double z, double gamma);

// Cyclic coordinate descent with active-set sweeps between full passes.
// Convergence is declared only on a full sweep. Throws ConvergenceError
// when max_sweeps is exhausted. When given, `objective_trace` collects the
// penalized objective after every sweep.
Eigen::VectorXd cd_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const PenalizedSpec& spec,
                         const std::optional<Eigen::VectorXd>& warm_start = {},
                         std::vector<double>* objective_trace = nullptr);

// Smallest lambda1 whose solution is identically zero: 2 max_j |x_j . y|.
double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

double penalized_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const PenalizedSpec& spec, const Eigen::VectorXd& beta);

}  // namespace sven
