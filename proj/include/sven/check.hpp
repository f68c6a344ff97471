// Randomized oracle-equivalence harness: on seeded synthetic instances the
// reduction's answer must match the coordinate-descent solution at the
// budget-equivalent penalty.
#pragma once

#include <cstdint>
#include <vector>

#include "sven/reduction.hpp"

namespace sven {

// Deliberate defects used to verify the harness catches broken recoveries.
enum class CheckMutation { none, drop_alpha_norm };

struct CheckOptions {
  int cases = 200;
  std::uint64_t seed = 12345;
  double tol = 1e-4;
  CheckMutation mutation = CheckMutation::none;
  SolverConfig solver;
};

struct CheckCase {
  std::uint64_t seed = 0;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  double lambda2 = 0.0;
  // Worst values across the three budget fractions {0.3, 0.6, 0.9}.
  double max_diff = 0.0;
  double max_l1_gap = 0.0;  // | |beta|_1 - t |, the budget-tightness gap
  Route route = Route::dual;
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckCase> cases;
  bool all_pass = false;
  double max_diff = 0.0;
  double max_l1_gap = 0.0;
  int passed = 0;
};

CheckReport run_equivalence_check(const CheckOptions& options);

}  // namespace sven
