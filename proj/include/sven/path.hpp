// Regularization-path machinery: sweep a lambda1 grid with the CD solver,
// harvest (lambda2, t) settings with distinct support sizes, and evaluate
// the SVM reduction on them.
#pragma once

#include <Eigen/Core>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sven/cd.hpp"
#include "sven/reduction.hpp"

namespace sven {

struct PathRecord {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double t = 0.0;  // |beta|_1
  Eigen::VectorXd beta;
  Eigen::Index support_size = 0;
  std::string solver;  // "cd" or "sven"
  double wall_time_ms = 0.0;
  bool ok = true;
  std::string error;
};

struct PathResult {
  std::vector<PathRecord> records;
};

struct SelectedPoint {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double t = 0.0;
  std::size_t path_index = 0;  // index into the source path's records
};

// Warm-started CD solves along a log-spaced lambda1 grid from
// lambda_max(X, y) down to decades (default 3) below it. The first record
// is the all-zero solution at lambda_max. A zero lambda_max (y orthogonal
// to every column) yields that single degenerate record.
PathResult cd_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   double lambda2, int grid_size = 100, double decades = 3.0,
                   const PenalizedSpec& base = {});

// Up to k (lambda2, t) pairs: zero-support head dropped, at most one record
// per distinct support size (first occurrence kept), then evenly spaced by
// position among the remaining candidates.
std::vector<SelectedPoint> select_path_points(const PathResult& path, int k);

// sven_solve on each pair; consecutive dual-route solves share warm starts.
// Per-pair failures are recorded and evaluation continues.
PathResult sven_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<SelectedPoint>& points,
                     const SolverConfig& cfg);

struct BudgetConversion {
  double lambda1 = 0.0;
  Eigen::VectorXd beta;  // CD solution at lambda1, with |beta|_1 = t
  int cd_solves = 0;
};

// Finds lambda1 such that the CD solution satisfies |beta|_1 = t, by
// bisection on [~0, lambda_max]; |beta(lambda1)|_1 is continuous and
// non-increasing in lambda1. Throws DegenerateInputError when t is not
// reachable (t larger than the small-penalty L1 norm).
BudgetConversion lambda1_for_budget(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y, double lambda2,
                                    double t, const PenalizedSpec& base = {},
                                    double rel_tol = 1e-9);

// CSV with header lambda1,lambda2,t,nnz,beta_1,...,beta_p at 17 significant
// digits.
void write_path_csv(const PathResult& path, std::ostream& out);
PathResult read_path_csv(std::istream& in);

}  // namespace sven
