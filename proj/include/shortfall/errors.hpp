#pragma once

#include <stdexcept>
#include <string>

namespace shortfall {

/// Invalid parameters or an argument outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A risk functional that diverges for the given law, e.g. a Pareto tail
/// with index <= 1 under a distortion with positive slope at zero.
class NonIntegrableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative method stopped without meeting its tolerance.
///
/// For root finding `lower`/`upper` hold the final bracket; for quadrature
/// `estimate` is the achieved value and `error` its error estimate.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double lower, double upper,
               double estimate, double error)
      : std::runtime_error(what),
        lower_(lower),
        upper_(upper),
        estimate_(estimate),
        error_(error) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

 private:
  double lower_;
  double upper_;
  double estimate_;
  double error_;
};

}  // namespace shortfall
