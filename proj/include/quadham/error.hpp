#pragma once

#include <stdexcept>
#include <string>

namespace quadham {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or violated precondition (bad index, non-finite value,
/// basis mismatch, non-Hermitian combination, bad configuration).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy answer.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// The requested spectrum has no ladder lattice (non-real or defective case).
class LatticeUnavailable : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// A linear form failed the eigenoperator test [H, Z] = lambda Z.
class NotAnEigenoperator : public ComputationError {
 public:
  NotAnEigenoperator(const std::string& what, double residual)
      : ComputationError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace quadham
