#pragma once

#include <stdexcept>
#include <string>

namespace gausskey {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain where the quantity is defined
/// (μ < 1, τ ∉ (0,1), ω ≤ 1 for an empty region, bad mode index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The attack correlations violate the uncertainty-principle constraints.
class PhysicalityError : public DomainError {
 public:
  PhysicalityError(std::string message, int constraint)
      : DomainError(std::move(message)), constraint_(constraint) {}

  /// 1: |g| < ω, 2: |g'| < ω, 3: ω|g+g'| ≤ ω² + gg' − 1.
  int constraint() const noexcept { return constraint_; }

 private:
  int constraint_;
};

/// A numerical routine could not produce a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gausskey
