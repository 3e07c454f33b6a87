#pragma once

#include <stdexcept>
#include <string>

namespace ecd {

// Thrown when a requested object would exceed the dense-storage budget.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// Thrown by iterative numerical kernels that fail to converge.
// Carries the residual at the point of failure.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace ecd
