#pragma once

#include <stdexcept>
#include <string>

namespace rzspec {

/// Base of every error raised by the numeric kernels.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (x <= 0, a not in (0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at a pole (Gamma at non-positive integers, zeta at 1).
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The map z <-> tau is not defined at the potential wells z = 0, 1.
class SingularInputError : public Error {
 public:
  using Error::Error;
};

/// Lattice sum requested where it does not converge (Re s <= 1).
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Grid too coarse for the finite-difference check at this energy.
class CoarseGridError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Contour operation needs a closed loop.
class OpenLoopError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// s = 1/2 makes the reduced wave function vanish identically.
class DegenerateParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed zeros file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Zeros out of order or duplicated.
class OrderingError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Request exceeds a configured cap (grid size, zero count).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The zero scan did not bracket enough sign changes.
class SearchExhaustedError : public Error {
 public:
  using Error::Error;
};

/// Field is not real enough (after phase normalization) for nodal analysis.
class PhaseResidualError : public Error {
 public:
  using Error::Error;
};

/// A fit or contour computation lacks the data it needs.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Fewer sign changes than a fit or verdict needs.
class InsufficientOscillationError : public FitError {
 public:
  using FitError::FitError;
};

}  // namespace rzspec
