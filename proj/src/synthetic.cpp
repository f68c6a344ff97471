#include "sven/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

namespace sven {

double Rng::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(engine_() % span);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RegressionProblem make_regression(std::uint64_t seed, Eigen::Index n,
                                  Eigen::Index p, Eigen::Index support,
                                  double noise_level) {
  Rng rng(seed);
  if (support <= 0) support = std::max<Eigen::Index>(3, p / 20);
  support = std::min(support, p);

  RegressionProblem problem;
  problem.X.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) problem.X(i, j) = rng.normal();
  }

  std::vector<Eigen::Index> order(p);
  std::iota(order.begin(), order.end(), 0);
  for (Eigen::Index j = p - 1; j > 0; --j) {
    std::swap(order[j], order[rng.uniform_int(0, j)]);
  }
  Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(p);
  for (Eigen::Index k = 0; k < support; ++k) {
    beta0[order[k]] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 1.5);
  }

  const Eigen::VectorXd signal = problem.X * beta0;
  const double sigma =
      noise_level * signal.norm() / std::sqrt(static_cast<double>(n));
  problem.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    problem.y[i] = signal[i] + sigma * rng.normal();
  }
  return problem;
}

SvmInstance make_svm_instance(std::uint64_t seed, Eigen::Index m,
                              Eigen::Index d, double C) {
  Rng rng(seed);
  SvmInstance instance;
  instance.samples.resize(m, d);
  instance.labels.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) instance.samples(i, j) = rng.normal();
    instance.labels[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  }
  instance.C = C;
  return instance;
}

RegressionProblem make_prostate_like(std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index n = 97;
  const Eigen::Index p = 8;
  const double rho = 0.6;
  const double cross = std::sqrt(1.0 - rho * rho);

  RegressionProblem problem;
  problem.X.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    double prev = rng.normal();
    problem.X(i, 0) = prev;
    for (Eigen::Index j = 1; j < p; ++j) {
      prev = rho * prev + cross * rng.normal();
      problem.X(i, j) = prev;
    }
  }
  // Assorted raw scales/offsets so standardization does real work.
  const double scales[p] = {1.2, 0.4, 7.5, 1.5, 0.5, 1.4, 0.9, 28.0};
  const double offsets[p] = {1.35, 3.6, 63.0, 0.1, 0.2, -0.18, 6.75, 24.0};
  for (Eigen::Index j = 0; j < p; ++j) {
    problem.X.col(j) = problem.X.col(j) * scales[j] +
                       Eigen::VectorXd::Constant(n, offsets[j]);
  }

  Eigen::VectorXd beta0(p);
  beta0 << 0.65, 0.25, -0.15, 0.2, 0.3, -0.1, 0.05, 0.12;
  // Coefficients apply to the standardized columns to keep all features
  // relevant on comparable scale.
  Eigen::MatrixXd Xs = problem.X;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = Xs.col(j).mean();
    Xs.col(j).array() -= mean;
    Xs.col(j) /= Xs.col(j).norm();
  }
  const Eigen::VectorXd signal = Xs * beta0;
  problem.y.resize(n);
  const double sigma = 0.25 * signal.norm() / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    problem.y[i] = 2.48 + signal[i] + sigma * rng.normal();
  }
  problem.feature_names = {"lcavol", "lweight", "age",     "lbph",
                           "svi",    "lcp",     "gleason", "pgg45"};
  return problem;
}

std::string problem_digest(const RegressionProblem& problem) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  const auto feed = [&hash](const void* data, std::size_t bytes) {
    const auto* bytes_ptr = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      hash ^= bytes_ptr[i];
      hash *= 0x100000001b3ULL;
    }
  };
  const std::int64_t n = problem.n_samples();
  const std::int64_t p = problem.n_features();
  feed(&n, sizeof(n));
  feed(&p, sizeof(p));
  feed(problem.X.data(), sizeof(double) * problem.X.size());
  feed(problem.y.data(), sizeof(double) * problem.y.size());

  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace sven
