#pragma once

#include <stdexcept>
#include <string>

namespace lrdimer {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation (R <= 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A request that is well-formed numerically but not meaningful (J < Omega,
/// reflection label on an Omega != 0 block, unknown configuration keys).
class UsageError : public Error {
public:
  using Error::Error;
};

/// Bose statistics forbids the requested rotational level.
class StatisticsError : public UsageError {
public:
  using UsageError::UsageError;
};

/// Base of all numerical-convergence failures.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Eigenvector continuity was lost between two neighbouring grid points.
class RefinementError : public ConvergenceError {
public:
  RefinementError(const std::string &what, double rLow, double rHigh)
      : ConvergenceError(what), rLow_(rLow), rHigh_(rHigh) {}
  double rLow() const { return rLow_; }
  double rHigh() const { return rHigh_; }

private:
  double rLow_, rHigh_;
};

/// A bound level whose tail has not decayed by the end of the radial grid.
class GridExtensionError : public ConvergenceError {
public:
  GridExtensionError(const std::string &what, double requiredRmax)
      : ConvergenceError(what), requiredRmax_(requiredRmax) {}
  double requiredRmax() const { return requiredRmax_; }

private:
  double requiredRmax_;
};

class PairingError : public ConvergenceError {
public:
  using ConvergenceError::ConvergenceError;
};

class FitError : public ConvergenceError {
public:
  using ConvergenceError::ConvergenceError;
};

} // namespace lrdimer
