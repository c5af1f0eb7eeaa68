#pragma once

#include <stdexcept>
#include <string>

namespace hilscale {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different truncations (coefficient counts differ).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The truncation is too small to certify the requested smoothness.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t minimal_n)
      : Error(what), minimal_n_(minimal_n) {}
  std::size_t minimal_n() const noexcept { return minimal_n_; }

 private:
  std::size_t minimal_n_;
};

/// Landweber step size too large for the spectrum (omega * Lambda > 1).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Parameter choice rule with an exponent outside its admissible interval.
class InvalidRuleError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit over degenerate abscissae.
class FitError : public Error {
 public:
  using Error::Error;
};

/// A multi-level noise plan cannot be formed (some u_i is zero).
class PlanUndefinedError : public Error {
 public:
  using Error::Error;
};

/// Sweep would fit a regime dominated by truncation error.
class SaturationError : public Error {
 public:
  SaturationError(const std::string& what, double minimal_delta)
      : Error(what), minimal_delta_(minimal_delta) {}
  double minimal_delta() const noexcept { return minimal_delta_; }

 private:
  double minimal_delta_;
};

/// File system failures, carrying the offending path in the message.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hilscale
