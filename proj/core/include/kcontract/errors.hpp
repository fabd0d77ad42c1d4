#pragma once

#include <stdexcept>
#include <string>

namespace kcontract {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: bad shape, out-of-range index, non-finite entry, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// solve_small / inverse met a pivot too small for the conditioning cap.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// fit_decay had fewer than three usable samples in the window.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// A factorization failed its consistency identity g(t, p(x), x) = f(t, x).
class FactorizationMismatch : public Error {
 public:
  FactorizationMismatch(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

/// H^T H became numerically singular while extracting the horizontal part.
class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

/// A checker needs a factorization or frame the model does not carry.
class MissingStructure : public Error {
 public:
  using Error::Error;
};

/// Frame width does not match the n - k + 1 requirement.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The candidate subspace is not invariant under the linear dynamics.
class NotFlowInvariant : public Error {
 public:
  NotFlowInvariant(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace kcontract
