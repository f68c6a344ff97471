// Error types shared across the solver toolkit.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sven {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (ragged rows, bad numbers, bad indices).
struct ParseError : Error {
  using Error::Error;
};

// Shape mismatch or out-of-range dimension.
struct DimensionError : Error {
  using Error::Error;
};

// Input that cannot be standardized/solved (e.g. all columns constant).
struct DegenerateInputError : Error {
  using Error::Error;
};

// Solver hit its iteration budget. Carries the residual reached and the
// last iterate so the caller can decide whether the partial answer is
// usable.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, double residual, int iterations,
                   std::vector<double> last_iterate = {})
      : Error(msg),
        residual(residual),
        iterations(iterations),
        last_iterate(std::move(last_iterate)) {}
  double residual;
  int iterations;
  std::vector<double> last_iterate;
};

// The SVM selected no support vectors (sum(alpha) = 0), so the coefficient
// recovery is undefined.
struct DegenerateSolutionError : Error {
  using Error::Error;
};

}  // namespace sven
