#pragma once

#include <stdexcept>
#include <string>

namespace dyadsq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on parameters or inputs was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Dyadic level beyond the configured maximum depth.
class DepthError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The requested integral diverges (e.g. x^gamma with gamma <= -1 down to 0).
class NonIntegrableError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or shell summation did not reach its error target.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// A series could not be given a geometric tail bound within the allowed terms.
class TailNotCertifiedError : public Error {
 public:
  using Error::Error;
};

/// A probed hypothesis of the line-extension construction failed.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace dyadsq
