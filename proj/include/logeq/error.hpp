#pragma once

#include <stdexcept>
#include <string>

namespace logeq {

/// Argument outside the mathematical domain of an operation (including
/// evaluation points on a branch cut or on the support of the measure).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Two independent routes to the same quantity disagree beyond tolerance.
class InconsistencyError : public std::runtime_error {
 public:
  explicit InconsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative method stopped before meeting its convergence criterion.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace logeq
