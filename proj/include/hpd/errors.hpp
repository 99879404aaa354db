#pragma once

#include <stdexcept>
#include <string>

namespace hpd {

/// Violated precondition: bad dimensions, non-HPD input, n <= d^2 for zonoid
/// depth, out-of-range parameters.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Floating-point breakdown: overflow, eigensolver or LP iteration caps.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hpd
