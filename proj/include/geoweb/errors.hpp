#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoweb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Errors caused by malformed user input (bad expressions, bad flags).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Errors raised by the numerics (singularities, non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : InputError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvalDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivisionByZeroJet : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OrderExceeded : public Error {
 public:
  using Error::Error;
};

class JetMismatch : public Error {
 public:
  using Error::Error;
};

class PoleProximity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class HalfPeriodSingularity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateWeb : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FamilySingularity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotCurvatureFlat : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SignChange : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientSamples : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace geoweb
