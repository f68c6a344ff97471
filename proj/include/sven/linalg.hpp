// Dense SPD solves: LDLT with iterative refinement for small systems,
// Jacobi-preconditioned conjugate gradient for large ones.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>

namespace sven {

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Conjugate gradient on A x = b for SPD A given as a matrix-free product.
// `apply` maps v to A v; `diag` is the diagonal of A (Jacobi preconditioner).
// Stops when ||b - A x|| <= tol * ||b||. `x` holds the initial guess on
// entry and the solution on exit.
template <typename ApplyFn>
CgResult cg_solve(const ApplyFn& apply, const Eigen::VectorXd& diag,
                  const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol,
                  int max_iter) {
  CgResult result;
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    x.setZero(b.size());
    result.converged = true;
    return result;
  }
  const Eigen::ArrayXd inv_diag = diag.array().max(1e-300).inverse();

  Eigen::VectorXd r = b - apply(x);
  Eigen::VectorXd z = (r.array() * inv_diag).matrix();
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  for (int it = 0; it < max_iter; ++it) {
    if (r.norm() <= tol * b_norm) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd ap = apply(p);
    const double denom = p.dot(ap);
    if (denom <= 0.0) break;  // loss of positive definiteness in finite arithmetic
    const double alpha = rz / denom;
    x += alpha * p;
    r -= alpha * ap;
    z = (r.array() * inv_diag).matrix();
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
    result.iterations = it + 1;
  }
  result.relative_residual = r.norm() / b_norm;
  if (result.relative_residual <= tol) result.converged = true;
  return result;
}

// Cholesky solve with a couple of refinement passes; keeps the residual
// near machine precision even for badly conditioned systems (large C).
// Plain LLT is the fast path; when it breaks down or leaves a poor
// residual (near-semidefinite faces in the lasso limit) the pivoted LDLT
// takes over.
inline Eigen::VectorXd solve_spd_direct(const Eigen::MatrixXd& A,
                                        const Eigen::VectorXd& b) {
  const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  double achieved = std::numeric_limits<double>::infinity();
  const auto refine = [&](const auto& factorization) {
    Eigen::VectorXd x = factorization.solve(b);
    for (int pass = 0; pass < 3; ++pass) {
      Eigen::VectorXd r = b - A.selfadjointView<Eigen::Lower>() * x;
      achieved = r.lpNorm<Eigen::Infinity>();
      if (achieved <= 1e-15 * scale) break;
      x += factorization.solve(r);
    }
    return x;
  };
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd x = refine(llt);
    if (achieved <= 1e-10 * scale) return x;
  }
  return refine(Eigen::LDLT<Eigen::MatrixXd>(A));
}

}  // namespace sven
