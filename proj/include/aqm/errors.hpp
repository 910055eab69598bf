#pragma once

#include <stdexcept>
#include <string>

namespace aqm {

// Input outside the domain of an operation (rapidity bound, χ ≤ 0, n < 3, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Coordinate chart degenerates (gimbal lock, boost bound on a stencil point).
class ChartError : public DomainError {
 public:
  explicit ChartError(const std::string& what) : DomainError(what) {}
};

// Ill-conditioned linear algebra (singular metric, failed Newton solve).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Null momentum in the normalized Hamilton-Jacobi flow.
class DegenerateFlowError : public NumericError {
 public:
  explicit DegenerateFlowError(const std::string& what) : NumericError(what) {}
};

}  // namespace aqm
