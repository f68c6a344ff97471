// Seeded synthetic problem generators and instance digests for the check
// and bench harnesses. The RNG pipeline is self-contained (Box-Muller over
// raw mt19937_64 draws) so generated data is identical across standard
// library implementations.
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "sven/dataset.hpp"
#include "sven/svm.hpp"

namespace sven {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // standard normal
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64; used to derive per-case seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

// Gaussian design with a sparse coefficient vector:
//   y = X beta0 + noise_level * ||X beta0|| / sqrt(n) * eps.
// `support` defaults to max(3, p/20) when not positive.
RegressionProblem make_regression(std::uint64_t seed, Eigen::Index n,
                                  Eigen::Index p, Eigen::Index support = 0,
                                  double noise_level = 0.1);

// Random classification instance with +-1 labels.
SvmInstance make_svm_instance(std::uint64_t seed, Eigen::Index m,
                              Eigen::Index d, double C);

// 97 x 8 regression problem with AR(1)-correlated features on assorted raw
// scales; stands in for the eight-feature clinical dataset when the real
// file is unavailable.
RegressionProblem make_prostate_like(std::uint64_t seed = 20140704);

// FNV-1a over the raw bytes of X and y plus the dimensions; hex string.
std::string problem_digest(const RegressionProblem& problem);

}  // namespace sven
