#pragma once

#include <stdexcept>
#include <string>

namespace hesscap {

/// Precondition violated by the caller (bad k, bad radius, non-symmetric input, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input fails the k-admissibility scan beyond the allowed fraction.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two quadrature routes for the same quantity disagree.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the supported regime (e.g. closed-form capacity with k > n/2).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hesscap
