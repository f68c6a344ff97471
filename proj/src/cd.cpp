#include "sven/cd.hpp"

#include <cmath>
#include <string>

#include "sven/errors.hpp"

namespace sven {

void PenalizedSpec::validate() const {
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw DimensionError("penalty weights must be nonnegative");
  }
  if (!(tol > 0.0)) throw DimensionError("tol must be positive");
  if (max_sweeps < 1) throw DimensionError("max_sweeps must be at least 1");
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

namespace {

// One coordinate sweep over `order`; returns the max absolute change.
// Residual r = y - X beta is maintained incrementally; with unit-norm
// columns the update is S(x_j . r + beta_j, lambda1/2) / (1 + lambda2).
double sweep(const Eigen::MatrixXd& X, Eigen::VectorXd& beta,
             Eigen::VectorXd& residual, const std::vector<Eigen::Index>& order,
             double lambda1, double lambda2) {
  const double threshold = 0.5 * lambda1;
  const double denom = 1.0 + lambda2;
  double max_change = 0.0;
  for (Eigen::Index j : order) {
    const double old = beta[j];
    const double z = X.col(j).dot(residual) + old;
    const double updated = soft_threshold(z, threshold) / denom;
    if (updated != old) {
      residual += X.col(j) * (old - updated);
      beta[j] = updated;
      max_change = std::max(max_change, std::abs(updated - old));
    }
  }
  return max_change;
}

}  // namespace

Eigen::VectorXd cd_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const PenalizedSpec& spec,
                         const std::optional<Eigen::VectorXd>& warm_start,
                         std::vector<double>* objective_trace) {
  spec.validate();
  if (X.rows() != y.size()) throw DimensionError("X and y row counts differ");
  const Eigen::Index p = X.cols();

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (warm_start) {
    if (warm_start->size() != p) throw DimensionError("warm start has wrong length");
    beta = *warm_start;
  }
  Eigen::VectorXd residual = y - X * beta;

  std::vector<Eigen::Index> full_order(p);
  for (Eigen::Index j = 0; j < p; ++j) full_order[j] = j;

  const auto trace = [&] {
    if (objective_trace) {
      objective_trace->push_back(penalized_objective(X, y, spec, beta));
    }
  };

  int sweeps = 0;
  double last_change = 0.0;
  while (sweeps < spec.max_sweeps) {
    last_change = sweep(X, beta, residual, full_order, spec.lambda1, spec.lambda2);
    ++sweeps;
    trace();
    if (last_change <= spec.tol) return beta;

    // Iterate the current support until it settles, then re-check globally.
    std::vector<Eigen::Index> support;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (beta[j] != 0.0) support.push_back(j);
    }
    while (!support.empty() && sweeps < spec.max_sweeps) {
      const double change =
          sweep(X, beta, residual, support, spec.lambda1, spec.lambda2);
      ++sweeps;
      trace();
      if (change <= spec.tol) break;
    }
  }
  throw ConvergenceError(
      "coordinate descent did not converge in " +
          std::to_string(spec.max_sweeps) + " sweeps",
      last_change, spec.max_sweeps,
      std::vector<double>(beta.data(), beta.data() + beta.size()));
}

double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() != y.size()) throw DimensionError("X and y row counts differ");
  return 2.0 * (X.transpose() * y).cwiseAbs().maxCoeff();
}

double penalized_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const PenalizedSpec& spec, const Eigen::VectorXd& beta) {
  return (X * beta - y).squaredNorm() + spec.lambda2 * beta.squaredNorm() +
         spec.lambda1 * beta.lpNorm<1>();
}

}  // namespace sven
