// Loading and standardization of regression data.
//
// Solvers in this toolkit assume a centered response and features scaled to
// unit L2 norm; standardize() produces that form and records everything
// needed to map coefficients back to the original units.
#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace sven {

struct RegressionProblem {
  Eigen::MatrixXd X;  // n x p design matrix
  Eigen::VectorXd y;  // response, length n
  std::vector<std::string> feature_names;  // empty or length p

  Eigen::Index n_samples() const { return X.rows(); }
  Eigen::Index n_features() const { return X.cols(); }
};

// Throws DimensionError / DegenerateInputError when the basic shape and
// finiteness invariants do not hold. `min_samples` is 2 for solver input,
// 1 for formats whose single-line semantics are well defined.
void validate(const RegressionProblem& problem, Eigen::Index min_samples = 2);

struct StandardizationRecord {
  double y_mean = 0.0;
  Eigen::VectorXd col_means;   // length p (original)
  Eigen::VectorXd col_scales;  // length p (original); 0 marks a dropped column

  Eigen::Index n_dropped() const { return (col_scales.array() == 0.0).count(); }
  // Indices of retained original columns, in order.
  std::vector<Eigen::Index> kept_columns() const;
};

// CSV: comma separated, '.' decimal, response in column 1, optional single
// header line. Rows must all have the same column count (>= 2).
RegressionProblem load_dense_csv(const std::string& path, bool has_header);

// libsvm lines "<label> <idx>:<val> ...", 1-based strictly increasing
// indices. The result is densified; p = max index seen (or dim_hint if
// larger). Single-line files are accepted.
RegressionProblem load_libsvm(const std::string& path,
                              std::optional<Eigen::Index> dim_hint = {});

// Writes nonzero entries only; reload with dim_hint = n_features() to
// reproduce the matrix exactly (values round-trip bit for bit).
void write_libsvm(const RegressionProblem& problem, const std::string& path);

// Centers y, centers every column of X and scales it to unit L2 norm.
// Zero-variance columns are dropped (scale recorded as 0). Throws
// DegenerateInputError when every column is constant.
std::pair<RegressionProblem, StandardizationRecord> standardize(
    const RegressionProblem& problem);

// Inverse of standardize, reconstructing dropped columns as constants.
RegressionProblem unstandardize(const RegressionProblem& standardized,
                                const StandardizationRecord& record);

// Maps coefficients on the standardized problem back to original units
// (zeros at dropped columns). The matching intercept is
// y_mean - dot(beta_original, col_means).
Eigen::VectorXd coefficients_to_original(const Eigen::VectorXd& beta_standardized,
                                         const StandardizationRecord& record);

double intercept_for_original(const Eigen::VectorXd& beta_original,
                              const StandardizationRecord& record);

}  // namespace sven
