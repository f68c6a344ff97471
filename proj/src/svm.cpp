#include "sven/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sven/errors.hpp"
#include "sven/linalg.hpp"

namespace sven {
namespace {

void check_weight_dim(const SvmInstance& instance, const Eigen::VectorXd& w) {
  if (w.size() != instance.dim()) {
    throw DimensionError("weight vector has length " + std::to_string(w.size()) +
                         ", expected " + std::to_string(instance.dim()));
  }
}

void check_alpha(const SvmInstance& instance, const Eigen::VectorXd& alpha,
                 bool require_nonnegative) {
  if (alpha.size() != instance.n_samples()) {
    throw DimensionError("alpha has length " + std::to_string(alpha.size()) +
                         ", expected " + std::to_string(instance.n_samples()));
  }
  if (require_nonnegative && (alpha.array() < 0.0).any()) {
    throw Error("alpha has a negative entry");
  }
}

Eigen::VectorXd slacks_at(const SvmInstance& instance, const Eigen::VectorXd& w) {
  Eigen::ArrayXd margins =
      instance.labels.array() * (instance.samples * w).array();
  return (1.0 - margins).max(0.0).matrix();
}

// Rows of `samples` restricted to an index set.
Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& samples,
                            const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), samples.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(k) = samples.row(rows[k]);
  return out;
}

// Label-signed Gram matrix K = Z' Z with K_ij = y_i y_j x_i . x_j.
Eigen::MatrixXd kernel_matrix(const SvmInstance& instance) {
  const Eigen::Index m = instance.n_samples();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
  K.selfadjointView<Eigen::Lower>().rankUpdate(instance.samples);
  K.triangularView<Eigen::StrictlyUpper>() =
      K.triangularView<Eigen::StrictlyLower>().transpose();
  K.array().colwise() *= instance.labels.array();
  K.array().rowwise() *= instance.labels.transpose().array();
  return K;
}

}  // namespace

void validate(const SvmInstance& instance) {
  if (instance.n_samples() < 1 || instance.dim() < 1) {
    throw DimensionError("SVM instance needs at least one sample and one feature");
  }
  if (instance.labels.size() != instance.n_samples()) {
    throw DimensionError("labels do not match the sample count");
  }
  if (!(instance.C > 0.0)) throw DimensionError("C must be positive");
  for (Eigen::Index i = 0; i < instance.labels.size(); ++i) {
    if (instance.labels[i] != 1.0 && instance.labels[i] != -1.0) {
      throw DimensionError("labels must be exactly +1 or -1");
    }
  }
  if (!instance.samples.allFinite()) {
    throw DegenerateInputError("samples contain non-finite values");
  }
}

double primal_objective(const SvmInstance& instance, const Eigen::VectorXd& w) {
  check_weight_dim(instance, w);
  const Eigen::VectorXd xi = slacks_at(instance, w);
  return 0.5 * w.squaredNorm() + instance.C * xi.squaredNorm();
}

Eigen::VectorXd primal_gradient(const SvmInstance& instance,
                                const Eigen::VectorXd& w) {
  check_weight_dim(instance, w);
  const Eigen::VectorXd scores = instance.samples * w;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(instance.n_samples());
  for (Eigen::Index i = 0; i < instance.n_samples(); ++i) {
    if (instance.labels[i] * scores[i] < 1.0) {
      coef[i] = scores[i] - instance.labels[i];
    }
  }
  return w + 2.0 * instance.C * (instance.samples.transpose() * coef);
}

double dual_objective(const SvmInstance& instance, const Eigen::VectorXd& alpha) {
  check_alpha(instance, alpha, /*require_nonnegative=*/true);
  const Eigen::VectorXd za = dual_to_primal(instance, alpha);
  return za.squaredNorm() + alpha.squaredNorm() / (2.0 * instance.C) -
         2.0 * alpha.sum();
}

PrimalSolution solve_primal(const SvmInstance& instance, const SolverConfig& cfg) {
  validate(instance);
  const Eigen::Index d = instance.dim();
  const double C = instance.C;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  const double grad0_norm = primal_gradient(instance, w).norm();
  const double thresh = cfg.tol * std::max(1.0, grad0_norm);

  double objective = primal_objective(instance, w);
  double grad_norm = grad0_norm;
  int iterations = 0;
  bool last_step_full = false;
  std::vector<Eigen::Index> previous_violators = {-1};  // impossible sentinel

  for (int it = 0; it < cfg.max_iter; ++it) {
    // Violators at the current iterate define the smooth piece; the Newton
    // step lands on that piece's exact minimizer.
    const Eigen::VectorXd scores = instance.samples * w;
    std::vector<Eigen::Index> violators;
    for (Eigen::Index i = 0; i < instance.n_samples(); ++i) {
      if (instance.labels[i] * scores[i] < 1.0) violators.push_back(i);
    }

    const Eigen::VectorXd grad = primal_gradient(instance, w);
    grad_norm = grad.norm();
    // Stop only once the violator set has survived a full (unbacktracked)
    // Newton step: the iterate is then that piece's exact minimizer, which
    // keeps the answer sharp even when C is huge and `thresh` is lax.
    if (grad_norm <= thresh && last_step_full && violators == previous_violators) {
      PrimalSolution sol;
      sol.w = std::move(w);
      sol.slacks = slacks_at(instance, sol.w);
      sol.objective = 0.5 * sol.w.squaredNorm() + C * sol.slacks.squaredNorm();
      sol.iterations = iterations;
      sol.grad_norm = grad_norm;
      return sol;
    }
    previous_violators = violators;

    Eigen::VectorXd w_next;
    if (violators.empty()) {
      w_next = Eigen::VectorXd::Zero(d);
    } else {
      // The Newton system (I + 2C Sv' Sv) w = 2C Sv' yv is solved in the
      // 1/(2C)-scaled form below: the residual the factorization can reach
      // is proportional to ||rhs||, so keeping the 2C factor out of the
      // right-hand side is what makes huge-C (lasso-limit) solves accurate.
      const double inv_2c = 1.0 / (2.0 * C);
      const Eigen::MatrixXd sv = gather_rows(instance.samples, violators);
      Eigen::VectorXd yv(sv.rows());
      for (std::size_t k = 0; k < violators.size(); ++k) {
        yv[static_cast<Eigen::Index>(k)] = instance.labels[violators[k]];
      }
      const Eigen::VectorXd rhs = sv.transpose() * yv;
      if (d <= cfg.cg_threshold) {
        Eigen::MatrixXd hess =
            inv_2c * Eigen::MatrixXd::Identity(d, d);
        hess.selfadjointView<Eigen::Lower>().rankUpdate(sv.transpose());
        hess.triangularView<Eigen::StrictlyUpper>() =
            hess.triangularView<Eigen::StrictlyLower>().transpose();
        w_next = solve_spd_direct(hess, rhs);
      } else {
        const auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
          return inv_2c * v + sv.transpose() * (sv * v);
        };
        const Eigen::VectorXd diag =
            Eigen::VectorXd::Constant(d, inv_2c) +
            sv.array().square().colwise().sum().matrix().transpose();
        w_next = w;  // warm initial guess
        cg_solve(apply, diag, rhs, w_next, cfg.cg_tol, cfg.cg_max_iter);
      }
    }

    double next_objective = primal_objective(instance, w_next);
    last_step_full = true;
    if ((w_next - w).norm() <= 1e-14 * (1.0 + w.norm())) {
      // Already at this piece's minimizer; nothing to line-search.
      w_next = w;
      next_objective = objective;
    } else if (cfg.line_search && next_objective >= objective) {
      last_step_full = false;
      const Eigen::VectorXd direction = w_next - w;
      double step = 0.5;
      while (step > 1e-12) {
        w_next = w + step * direction;
        next_objective = primal_objective(instance, w_next);
        if (next_objective < objective) break;
        step *= 0.5;
      }
    }
    w = std::move(w_next);
    objective = next_objective;
    iterations = it + 1;
  }

  throw ConvergenceError("primal SVM Newton did not converge in " +
                             std::to_string(cfg.max_iter) + " iterations",
                         grad_norm, cfg.max_iter,
                         std::vector<double>(w.data(), w.data() + w.size()));
}

DualSolution solve_dual(const SvmInstance& instance, const SolverConfig& cfg,
                        const std::optional<Eigen::VectorXd>& warm_start) {
  validate(instance);
  const Eigen::Index m = instance.n_samples();
  const double eps = 1.0 / (2.0 * instance.C);

  // Kernel is formed once and cached for the whole solve.
  const Eigen::MatrixXd K = kernel_matrix(instance);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  if (warm_start) {
    check_alpha(instance, *warm_start, /*require_nonnegative=*/true);
    alpha = *warm_start;
  }

  // The gradient g = 2(K a + eps a - 1) is the one kernel-sized product per
  // iteration; the objective falls out of it as a.g/2 - sum(a), and g is
  // affine in alpha so line-search points need no extra products.
  const auto gradient_at = [&](const Eigen::VectorXd& a) -> Eigen::VectorXd {
    return 2.0 * (K.selfadjointView<Eigen::Lower>() * a + eps * a - ones);
  };
  const auto objective_from = [](const Eigen::VectorXd& a, const Eigen::VectorXd& g) {
    return 0.5 * a.dot(g) - a.sum();
  };

  std::vector<Eigen::Index> active;
  active.reserve(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (alpha[i] > 0.0) active.push_back(i);
  }
  if (active.empty()) {
    for (Eigen::Index i = 0; i < m; ++i) active.push_back(i);
  }

  Eigen::VectorXd grad = gradient_at(alpha);
  double objective = objective_from(alpha, grad);
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;

  const auto face_solve = [&](const std::vector<Eigen::Index>& set,
                              const Eigen::VectorXd& guess,
                              bool exact) -> Eigen::VectorXd {
    const auto k = static_cast<Eigen::Index>(set.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      for (Eigen::Index r = 0; r < k; ++r) sub(r, c) = K(set[r], set[c]);
      sub(c, c) += eps;
    }
    const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(k);
    if (k <= cfg.cg_threshold) return solve_spd_direct(sub, rhs);
    // Away from convergence a loose solve is enough to steer the active set.
    const double loose = exact ? cfg.cg_tol
                         : std::isfinite(residual)
                             ? 0.01 * std::min(1.0, residual)
                             : 1e-3;
    const double tol = std::max(cfg.cg_tol, loose);
    Eigen::VectorXd z = guess;
    const auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
      return sub.selfadjointView<Eigen::Lower>() * v;
    };
    cg_solve(apply, sub.diagonal(), rhs, z, tol, cfg.cg_max_iter);
    return z;
  };

  const auto embed_clipped = [&](const std::vector<Eigen::Index>& set,
                                 const Eigen::VectorXd& z) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < set.size(); ++k) {
      out[set[k]] = std::max(z[static_cast<Eigen::Index>(k)], 0.0);
    }
    return out;
  };

  const auto gather = [&](const std::vector<Eigen::Index>& set,
                          const Eigen::VectorXd& full) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(set.size()));
    for (std::size_t k = 0; k < set.size(); ++k) {
      out[static_cast<Eigen::Index>(k)] = full[set[k]];
    }
    return out;
  };

  // Nonnegative least squares in the Lawson-Hanson style: keep a passive
  // set, step only to the first boundary hit when the face minimizer goes
  // negative, and grow the set one most-violating index at a time. Finite
  // for this strictly convex objective; used as the fallback when the fast
  // clip iteration starts cycling.
  const auto nnls_finish = [&](int used_iterations) -> DualSolution {
    std::vector<Eigen::Index> passive;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (alpha[i] > 0.0) passive.push_back(i);
    }
    const int budget = 40 * static_cast<int>(m) + 400;
    int spent = 0;

    const auto settle_face = [&]() {
      while (!passive.empty() && spent < budget) {
        ++spent;
        const Eigen::VectorXd z =
            face_solve(passive, gather(passive, alpha), /*exact=*/true);
        if (z.minCoeff() > 0.0) {
          Eigen::VectorXd next = Eigen::VectorXd::Zero(m);
          for (std::size_t k = 0; k < passive.size(); ++k) {
            next[passive[k]] = z[static_cast<Eigen::Index>(k)];
          }
          alpha = std::move(next);
          return;
        }
        // Step toward z until the first coordinate reaches zero.
        double theta = 1.0;
        for (std::size_t k = 0; k < passive.size(); ++k) {
          const auto kk = static_cast<Eigen::Index>(k);
          if (z[kk] <= 0.0) {
            const double a = alpha[passive[k]];
            theta = std::min(theta, a / (a - z[kk]));
          }
        }
        std::vector<Eigen::Index> kept;
        for (std::size_t k = 0; k < passive.size(); ++k) {
          const auto kk = static_cast<Eigen::Index>(k);
          const double moved =
              alpha[passive[k]] + theta * (z[kk] - alpha[passive[k]]);
          alpha[passive[k]] = (z[kk] <= 0.0 && moved <= 1e-15) ? 0.0 : moved;
          if (alpha[passive[k]] > 0.0) kept.push_back(passive[k]);
        }
        passive = std::move(kept);
      }
    };

    settle_face();
    while (spent < budget) {
      ++spent;
      grad = gradient_at(alpha);
      residual = 0.0;
      Eigen::Index worst = -1;
      double worst_g = -cfg.tol;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double v = alpha[i] > 0.0 ? std::abs(grad[i]) : std::max(0.0, -grad[i]);
        residual = std::max(residual, v);
        if (alpha[i] == 0.0 && grad[i] < worst_g) {
          worst_g = grad[i];
          worst = i;
        }
      }
      if (residual <= cfg.tol) {
        DualSolution sol;
        sol.alpha = std::move(alpha);
        sol.objective = objective_from(sol.alpha, grad);
        sol.kkt_residual = residual;
        sol.iterations = used_iterations + spent;
        return sol;
      }
      if (worst < 0) break;  // residual lives on the passive set; face is stale
      passive.push_back(worst);
      settle_face();
    }
    throw ConvergenceError(
        "dual SVM solver did not converge (NNLS fallback)", residual,
        used_iterations + spent,
        std::vector<double>(alpha.data(), alpha.data() + alpha.size()));
  };

  // Plain zero-clip iterations converge fast (the KKT re-derivation prunes
  // the active set aggressively) but can cycle between two sets on
  // rank-deficient kernels; a short history of active-set hashes detects
  // the cycle and hands over to the finite fallback above.
  const auto hash_set = [](const std::vector<Eigen::Index>& set) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Eigen::Index i : set) {
      h ^= static_cast<std::uint64_t>(i);
      h *= 0x100000001b3ULL;
    }
    return h;
  };
  std::vector<std::uint64_t> set_history;

  for (int it = 0; it < cfg.max_iter; ++it) {
    iterations = it + 1;
    Eigen::VectorXd z = face_solve(active, gather(active, alpha), /*exact=*/false);
    Eigen::VectorXd candidate = embed_clipped(active, z);
    Eigen::VectorXd candidate_grad = gradient_at(candidate);

    alpha = std::move(candidate);
    grad = std::move(candidate_grad);
    objective = objective_from(alpha, grad);

    residual = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double v = alpha[i] > 0.0 ? std::abs(grad[i]) : std::max(0.0, -grad[i]);
      residual = std::max(residual, v);
    }
    if (residual <= cfg.tol) {
      DualSolution sol;
      sol.alpha = std::move(alpha);
      sol.objective = objective;
      sol.kkt_residual = residual;
      sol.iterations = iterations;
      return sol;
    }

    active.clear();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (alpha[i] > 0.0 || grad[i] < -cfg.tol) active.push_back(i);
    }
    const std::uint64_t h = hash_set(active);
    if (std::find(set_history.begin(), set_history.end(), h) !=
        set_history.end()) {
      return nnls_finish(iterations);
    }
    set_history.push_back(h);
    if (set_history.size() > 16) set_history.erase(set_history.begin());
  }

  throw ConvergenceError(
      "dual SVM active-set iteration did not converge in " +
          std::to_string(cfg.max_iter) + " iterations",
      residual, cfg.max_iter,
      std::vector<double>(alpha.data(), alpha.data() + alpha.size()));
}

Eigen::VectorXd primal_to_dual(const SvmInstance& instance,
                               const Eigen::VectorXd& w) {
  check_weight_dim(instance, w);
  return 2.0 * instance.C * slacks_at(instance, w);
}

Eigen::VectorXd dual_to_primal(const SvmInstance& instance,
                               const Eigen::VectorXd& alpha) {
  check_alpha(instance, alpha, /*require_nonnegative=*/false);
  return instance.samples.transpose() *
         (instance.labels.array() * alpha.array()).matrix();
}

double kkt_residual(const SvmInstance& instance, const Eigen::VectorXd& alpha) {
  check_alpha(instance, alpha, /*require_nonnegative=*/true);
  const Eigen::VectorXd za = dual_to_primal(instance, alpha);
  const Eigen::VectorXd g =
      2.0 * (instance.labels.array() * (instance.samples * za).array()).matrix() +
      alpha / instance.C - 2.0 * Eigen::VectorXd::Ones(instance.n_samples());
  double residual = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double v = alpha[i] > 0.0 ? std::abs(g[i]) : std::max(0.0, -g[i]);
    residual = std::max(residual, v);
  }
  return residual;
}

}  // namespace sven
