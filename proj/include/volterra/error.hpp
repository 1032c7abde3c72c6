#pragma once

#include <stdexcept>
#include <string>

namespace volterra {

// Base of every error thrown by the library. The CLI maps subclasses onto
// exit codes: InvalidArgument -> 2, everything numerical -> 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// Iterative procedure stopped before reaching its tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (achieved residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

// z_X(T, s) vanishes on some cell, so the prediction martingale has a flat
// quadratic variation there.
class DegenerateKernel : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  SingularMatrix(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

class FactorizationFailure : public Error {
public:
  using Error::Error;
};

class InsufficientData : public Error {
public:
  using Error::Error;
};

class MissingIncrements : public Error {
public:
  using Error::Error;
};

class NonUniformGrid : public Error {
public:
  using Error::Error;
};

}  // namespace volterra
