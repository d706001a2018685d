#pragma once

#include <stdexcept>
#include <string>

namespace hdqp {

/// Base class for every failure this library reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must be positive definite failed to factor.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

/// A factorization hit a pivot below the relative singularity threshold.
/// The message names the offending matrix (e.g. "M", "bordered matrix",
/// "Schur complement of A22").
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// An argument fell outside the mathematically valid range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A scalar equation has no root for the supplied distribution/ratio.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to have full rank is rank deficient.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

/// A sample (or resample) is too degenerate for the requested statistic.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

/// A constraint set is empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Bad experiment configuration or config-file syntax.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unknown figure preset identifier.
class UnknownFigureError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdqp
