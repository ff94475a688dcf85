// coporeg - regularization of linear copositive programs
// Licensed under Apache 2.0

#pragma once

#include <stdexcept>
#include <string>

namespace coporeg {

/// Base of every error thrown by the library. Domain errors map to CLI exit
/// code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (dimension mismatch, bad index,
/// empty point set, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Problem or matrix file could not be read or decoded.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The requested computation exceeds what the selected method supports,
/// e.g. exact support enumeration for p > p_max.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside the LP engine or the cutting-plane loop.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A dual certificate failed its stationarity check.
class CertificateError : public Error {
 public:
  CertificateError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A ledger matrix violated a structural condition (kernel membership,
/// compression bound).
class LedgerError : public Error {
 public:
  using Error::Error;
};

/// Two descriptions that must agree disagreed on a concrete input.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// The instance generator could not plant the requested points.
class GeneratorError : public Error {
 public:
  using Error::Error;
};

}  // namespace coporeg
