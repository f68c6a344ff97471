// Reduction of the Elastic Net
//
//   min_beta ||X beta - y||^2 + lambda2 ||beta||^2   s.t.  |beta|_1 <= t
//
// to a bias-free squared-hinge SVM on a constructed classification set with
// m = 2p samples of dimension d = n: sample j is column j of X shifted by
// -y/t with label +1, sample p+j is column j shifted by +y/t with label -1,
// and C = 1/(2 lambda2). The Elastic Net coefficients come back from the
// dual variables as beta_j = t (alpha_j - alpha_{p+j}) / sum(alpha), a map
// that is invariant under positive rescaling of alpha.
#pragma once

#include <Eigen/Core>
#include <optional>

#include "sven/svm.hpp"

namespace sven {

enum class Route { primal, dual };

const char* route_name(Route route);

struct SolverStats {
  int iterations = 0;
  double wall_time_ms = 0.0;
  bool tol_met = false;
  double residual = 0.0;  // primal: gradient norm; dual: KKT residual
};

struct ElasticNetSolution {
  Eigen::VectorXd beta;  // length p
  double t = 0.0;
  double lambda2 = 0.0;
  Route route = Route::dual;
  double alpha_sum = 0.0;
  SolverStats stats;
  Eigen::VectorXd alpha;  // length 2p; kept for warm starts and diagnostics

  Eigen::Index support_size() const { return (beta.array() != 0.0).count(); }
};

struct ReductionOptions {
  std::optional<Route> force_route;          // tests/CLI only; default dispatch is 2p > n
  double lasso_c_cap = 1e8;                  // C used when lambda2 == 0
  std::optional<Eigen::VectorXd> warm_alpha; // honored on the dual route only
};

// Builds the 2p-sample classification instance for budget t. C is left at
// its default; sven_solve sets it from lambda2.
SvmInstance build_svm_instance(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               double t);

// beta_j = t (alpha_j - alpha_{p+j}) / sum(alpha). Throws
// DegenerateSolutionError when sum(alpha) vanishes.
Eigen::VectorXd recover_beta(const Eigen::VectorXd& alpha, double t);

// Full reduction: build the instance, dispatch primal (2p > n) or dual,
// convert, and recover beta. Expects standardized inputs.
ElasticNetSolution sven_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              double t, double lambda2, const SolverConfig& cfg,
                              const ReductionOptions& opts = {});

}  // namespace sven
