#pragma once

#include <stdexcept>
#include <string>

namespace rootlab {

// Malformed inputs: bad files, unknown names, violated preconditions on data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failures: divergence, non-convergence, non-finite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RootFindingError : public NumericError {
 public:
  RootFindingError(const std::string& what, double best_residual)
      : NumericError(what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace rootlab
