// Desk-scale benchmark harness: seeded synthetic cases, both reduction
// routes plus the CD oracle along a short path, median wall times, and
// enough metadata to regenerate every instance exactly.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sven/reduction.hpp"

namespace sven {

struct BenchSize {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
};

struct BenchOptions {
  std::string regime;  // "pggn" or "nggp"; labels the report
  std::vector<BenchSize> sizes;
  std::vector<std::uint64_t> seeds;
  int repeats = 3;
  double lambda2 = 1.0;
  int path_points = 3;
  bool timing = true;  // when false, wall times are reported as 0
  std::optional<Route> force_route;
  // When set, a single path point is taken at the first grid record whose
  // CD support reaches the generator's planted support (max(3, p/20)).
  bool point_at_generator_support = false;
  SolverConfig solver;
};

struct BenchSolverResult {
  std::string name;  // "cd", "sven-primal", "sven-dual"
  double wall_ms_median = 0.0;
  int iterations = 0;
  bool converged = false;
  Eigen::Index support = 0;
  double max_diff_vs_cd = 0.0;
};

struct BenchPointResult {
  double lambda1 = 0.0;
  double t = 0.0;
  Eigen::Index cd_support = 0;
  std::vector<BenchSolverResult> solvers;
};

struct BenchCaseResult {
  std::uint64_t seed = 0;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  std::string digest;      // regenerating with (seed, n, p) reproduces this
  std::string auto_route;  // what the 2p > n dispatch would pick
  Eigen::Index kernel_dim = 0;  // 2p, the dual kernel is kernel_dim^2
  std::vector<BenchPointResult> points;
};

struct BenchReport {
  std::string regime;
  double lambda2 = 0.0;
  int repeats = 0;
  int threads = 1;
  std::string build_info;
  std::vector<BenchCaseResult> cases;
};

BenchReport run_bench(const BenchOptions& options);

}  // namespace sven
